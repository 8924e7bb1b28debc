"""Indecomposables and the AR quiver by knitting almost split sequences."""

from __future__ import annotations

from collections import deque
from typing import Optional

from .algebra import Algebra
from .homological import (
    almost_split_sequence,
    decompose_with_maps,
    ext1_dim,
    find_iso,
    indec_injective,
    indec_projective,
    tau_inv,
)
from .module import Module, hom_dim, quotient, radical, socle_spaces

DEFAULT_KNIT_CAP = 10000


class RepresentationInfiniteError(RuntimeError):
    pass


class Catalogue:
    """Complete list of indecomposable modules with AR data and cached Hom/Ext tables.

    Ids are assigned in discovery order (projectives first, in vertex order).
    """

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self.modules: list = []
        self.tau: list = []  # id of tau X or None
        self.tau_inv: list = []
        self.arrows: dict = {}  # (i, j) -> multiplicity of irreducible maps X_i -> X_j
        self.projective: dict = {}  # vertex -> id
        self.injective: dict = {}
        self._hom: dict = {}
        self._ext: dict = {}

    def __len__(self):
        return len(self.modules)

    def find(self, M: Module) -> Optional[int]:
        for i, X in enumerate(self.modules):
            if X.dims == M.dims and find_iso(X, M) is not None:
                return i
        return None

    def _add(self, M: Module) -> tuple:
        i = self.find(M)
        if i is not None:
            return i, False
        self.modules.append(M)
        self.tau.append(None)
        self.tau_inv.append(None)
        return len(self.modules) - 1, True

    def name(self, i: int) -> str:
        return self.modules[i].name()

    def names(self) -> list:
        return [m.name() for m in self.modules]

    def id_of(self, name: str) -> int:
        for i, m in enumerate(self.modules):
            if m.name() == name:
                return i
        raise KeyError(f"no indecomposable named {name!r}")

    def is_projective(self, i: int) -> bool:
        return i in self.projective.values()

    def is_injective(self, i: int) -> bool:
        return i in self.injective.values()

    def hom(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._hom:
            self._hom[key] = hom_dim(self.modules[i], self.modules[j])
        return self._hom[key]

    def ext(self, i: int, j: int) -> int:
        key = (i, j)
        if key not in self._ext:
            self._ext[key] = 0 if self.is_projective(i) else ext1_dim(self.modules[i], self.modules[j])
        return self._ext[key]

    def hom_to_tau(self, i: int, j: int) -> int:
        """dim Hom(X_i, tau X_j)."""
        t = self.tau[j]
        return 0 if t is None else self.hom(i, t)

    def dimvec(self, i: int) -> tuple:
        return self.modules[i].dims

    def mesh_middle(self, j: int) -> dict:
        """Sources (with multiplicity) of irreducible maps ending at X_j."""
        return {i: m for (i, k), m in self.arrows.items() if k == j}

    def precompute(self):
        n = len(self)
        for i in range(n):
            for j in range(n):
                self.hom(i, j)
        return self


def indecomposables(A: Algebra, cap: int = DEFAULT_KNIT_CAP) -> Catalogue:
    cache = A.__dict__.setdefault("_hcache", {})
    if "catalogue" in cache:
        return cache["catalogue"]
    cat = Catalogue(A)
    queue: deque = deque()

    def add(M):
        i, new = cat._add(M)
        if new:
            queue.append(i)
            if len(cat) > cap:
                raise RepresentationInfiniteError(
                    f"knitting exceeded {cap} indecomposables; possibly representation-infinite"
                )
        return i

    for v in A.vertices:
        cat.projective[v] = add(indec_projective(A, v))
    for v in A.vertices:
        cat.injective[v] = add(indec_injective(A, v))

    while queue:
        z = queue.popleft()
        Z = cat.modules[z]
        if z in cat.projective.values():
            R, _ = radical(Z)
            for X, _, _ in decompose_with_maps(R):
                x = add(X)
                cat.arrows[(x, z)] = cat.arrows.get((x, z), 0) + 1
        else:
            Y, E, _, _ = almost_split_sequence(Z)
            y = add(Y)
            cat.tau[z] = y
            cat.tau_inv[y] = z
            for X, _, _ in decompose_with_maps(E):
                x = add(X)
                cat.arrows[(x, z)] = cat.arrows.get((x, z), 0) + 1
        if z not in cat.injective.values():
            add(tau_inv(Z))
        else:
            Q, _ = quotient(Z, socle_spaces(Z))
            for X, _, _ in decompose_with_maps(Q):
                add(X)
    cache["catalogue"] = cat
    return cat


def ar_quiver(A: Algebra, cap: int = DEFAULT_KNIT_CAP) -> Catalogue:
    return indecomposables(A, cap)


def ar_quiver_dot(cat: Catalogue) -> str:
    lines = ["digraph AR {", "  rankdir=LR;"]
    for i in range(len(cat)):
        lines.append(f'  n{i} [label="{cat.name(i)}"];')
    for (i, j), m in sorted(cat.arrows.items()):
        for _ in range(m):
            lines.append(f"  n{i} -> n{j};")
    for j, t in enumerate(cat.tau):
        if t is not None:
            lines.append(f"  n{j} -> n{t} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
