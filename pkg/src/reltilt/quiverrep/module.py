"""Representations of bound quivers and the morphisms between them."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

import numpy as np

from .. import exactlin as el
from .algebra import Algebra, AlgebraError


class Module:
    """A representation: one vector space per vertex, one matrix per arrow.

    ``mats[a]`` has shape (dim at target(a), dim at source(a)).
    """

    __slots__ = ("algebra", "dims", "mats", "_offsets", "_name")

    def __init__(self, algebra: Algebra, dims: Sequence[int], mats: Mapping, check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.n_vertices:
            raise AlgebraError("dimension vector has wrong length")
        p = algebra.field.p
        self.mats = {}
        for a in algebra.quiver.arrows:
            shape = (self.dim_at(a.target), self.dim_at(a.source))
            m = mats.get(a.name)
            m = np.zeros(shape, dtype=np.int64) if m is None else np.asarray(m, dtype=np.int64).reshape(shape) % p
            self.mats[a.name] = m
        off = [0]
        for d in self.dims:
            off.append(off[-1] + d)
        self._offsets = tuple(off)
        self._name = None
        if check and not self.satisfies_relations():
            raise AlgebraError("module does not satisfy the relations")

    # basic data
    def dim_at(self, v) -> int:
        return self.dims[self.algebra.vertex_index(v)]

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.dim == 0

    def block(self, v) -> slice:
        i = self.algebra.vertex_index(v)
        return slice(self._offsets[i], self._offsets[i + 1])

    def path_matrix(self, path) -> np.ndarray:
        F = self.algebra.field
        s, arrows = path
        out = np.eye(self.dim_at(s), dtype=np.int64)
        for name in arrows:
            out = F.mul(self.mats[name], out)
        return out

    def satisfies_relations(self) -> bool:
        p = self.algebra.field.p
        for r in self.algebra.relations:
            acc = None
            for path, c in r.items():
                m = self.path_matrix(path) * c % p
                acc = m if acc is None else (acc + m) % p
            if acc is not None and acc.any():
                return False
        return True

    def action(self, i: int) -> np.ndarray:
        """Matrix of basis element b_i acting on the total space."""
        A = self.algebra
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        b = A.basis[i]
        src, tgt = b[0], A.target(i)
        out[self.block(tgt), self.block(src)] = self.path_matrix(b)
        return out

    def __repr__(self):
        return f"Module({self.name()}, dims={self.dims})"

    def name(self) -> str:
        if self._name is None:
            self._name = loewy_name(self)
        return self._name

    def with_name(self, name: str) -> "Module":
        self._name = name
        return self

    def same_as(self, other: "Module") -> bool:
        return self.dims == other.dims and all(np.array_equal(self.mats[k], other.mats[k]) for k in self.mats)


class ModMorphism:
    __slots__ = ("source", "target", "maps")

    def __init__(self, source: Module, target: Module, maps: Sequence, check: bool = False):
        self.source = source
        self.target = target
        A = source.algebra
        p = A.field.p
        self.maps = tuple(
            np.asarray(m, dtype=np.int64).reshape(target.dims[i], source.dims[i]) % p for i, m in enumerate(maps)
        )
        if check and not self.is_homomorphism():
            raise AlgebraError("maps do not commute with the arrows")

    @classmethod
    def from_matrix(cls, source: Module, target: Module, M: np.ndarray) -> "ModMorphism":
        maps = []
        for i, v in enumerate(source.algebra.vertices):
            maps.append(M[target.block(v), source.block(v)])
        return cls(source, target, maps)

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModMorphism":
        return cls(source, target, [np.zeros((t, s), dtype=np.int64) for s, t in zip(source.dims, target.dims)])

    @classmethod
    def identity(cls, M: Module) -> "ModMorphism":
        return cls(M, M, [np.eye(d, dtype=np.int64) for d in M.dims])

    def matrix(self) -> np.ndarray:
        return el.block_diag(self.maps)

    def is_homomorphism(self) -> bool:
        F = self.source.algebra.field
        A = self.source.algebra
        for a in A.quiver.arrows:
            s, t = A.vertex_index(a.source), A.vertex_index(a.target)
            lhs = F.mul(self.maps[t], self.source.mats[a.name])
            rhs = F.mul(self.target.mats[a.name], self.maps[s])
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def is_zero(self) -> bool:
        return not any(m.any() for m in self.maps)

    def compose(self, f: "ModMorphism") -> "ModMorphism":
        """self after f."""
        F = self.source.algebra.field
        return ModMorphism(f.source, self.target, [F.mul(g, h) for g, h in zip(self.maps, f.maps)])

    def __matmul__(self, f):
        return self.compose(f)

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        return ModMorphism(self.source, self.target, [a + b for a, b in zip(self.maps, other.maps)])

    def scale(self, c: int) -> "ModMorphism":
        return ModMorphism(self.source, self.target, [a * c for a in self.maps])

    def vector(self) -> np.ndarray:
        return np.concatenate([m.reshape(-1) for m in self.maps]) if self.maps else np.zeros(0, dtype=np.int64)

    def rank(self) -> int:
        F = self.source.algebra.field
        return sum(el.rank(F, m) for m in self.maps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.rank() == self.source.dim

    def inverse(self) -> "ModMorphism":
        F = self.source.algebra.field
        return ModMorphism(self.target, self.source, [el.inverse(F, m) if m.size else m.T.copy() for m in self.maps])


def linear_combination(basis: Sequence[ModMorphism], coeffs, source=None, target=None) -> ModMorphism:
    if not basis:
        return ModMorphism.zero(source, target)
    out = ModMorphism.zero(basis[0].source, basis[0].target)
    for c, f in zip(coeffs, basis):
        if int(c) % basis[0].source.algebra.field.p:
            out = out + f.scale(int(c))
    return out


# Hom spaces


def _hom_system(M: Module, N: Module):
    A = M.algebra
    sizes = [N.dims[i] * M.dims[i] for i in range(A.n_vertices)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    rows = []
    for a in A.quiver.arrows:
        s, t = A.vertex_index(a.source), A.vertex_index(a.target)
        # phi_t M_a - N_a phi_s, row-major vectorization
        nt, ms, mt, ns = N.dims[t], M.dims[s], M.dims[t], N.dims[s]
        if nt * ms == 0:
            continue
        blk = np.zeros((nt * ms, off[-1]), dtype=np.int64)
        if nt * mt:
            blk[:, off[t] : off[t + 1]] += np.kron(np.eye(nt, dtype=np.int64), M.mats[a.name].T)
        if ns * ms:
            blk[:, off[s] : off[s + 1]] -= np.kron(N.mats[a.name], np.eye(ms, dtype=np.int64))
        rows.append(blk)
    total = int(off[-1])
    sys_ = np.vstack(rows) if rows else np.zeros((0, total), dtype=np.int64)
    return sys_, off, total


def _vec_to_morphism(M: Module, N: Module, v: np.ndarray, off) -> ModMorphism:
    maps = []
    for i in range(M.algebra.n_vertices):
        maps.append(v[off[i] : off[i + 1]].reshape(N.dims[i], M.dims[i]))
    return ModMorphism(M, N, maps)


def hom_basis(M: Module, N: Module) -> list:
    if M.algebra is not N.algebra and M.algebra.quiver != N.algebra.quiver:
        raise AlgebraError("modules over different algebras")
    F = M.algebra.field
    sys_, off, total = _hom_system(M, N)
    if total == 0:
        return []
    K = el.kernel(F, sys_) if sys_.shape[0] else np.eye(total, dtype=np.int64)
    return [_vec_to_morphism(M, N, K[:, j], off) for j in range(K.shape[1])]


def hom_dim(M: Module, N: Module) -> int:
    F = M.algebra.field
    sys_, off, total = _hom_system(M, N)
    if total == 0:
        return 0
    return total - (el.rank(F, sys_) if sys_.shape[0] else 0)


def morphism_coords(f: ModMorphism, basis: Sequence[ModMorphism]) -> Optional[np.ndarray]:
    """Coordinates of f in the span of ``basis`` (None if outside)."""
    F = f.source.algebra.field
    if not basis:
        return np.zeros(0, dtype=np.int64) if f.is_zero() else None
    B = np.stack([b.vector() for b in basis], axis=1)
    return el.solve_linear(F, B, f.vector())


# submodules, quotients, kernels, cokernels


def _cols(s, n: int) -> np.ndarray:
    s = np.asarray(s, dtype=np.int64)
    if s.size == 0:
        return np.zeros((n, s.shape[1] if s.ndim == 2 and s.shape[0] == n else 0), dtype=np.int64)
    return s.reshape(n, -1)


def submodule(M: Module, spaces: Sequence[np.ndarray]) -> tuple:
    """Submodule from per-vertex column bases (assumed invariant) and its inclusion."""
    A = M.algebra
    F = A.field
    spaces = [_cols(s, M.dims[i]) for i, s in enumerate(spaces)]
    mats = {}
    for a in A.quiver.arrows:
        s, t = A.vertex_index(a.source), A.vertex_index(a.target)
        img = F.mul(M.mats[a.name], spaces[s])
        if spaces[s].shape[1] == 0:
            mats[a.name] = np.zeros((spaces[t].shape[1], 0), dtype=np.int64)
            continue
        x = el.solve_linear(F, spaces[t], img) if spaces[t].shape[1] else (None if img.any() else np.zeros((0, img.shape[1]), dtype=np.int64))
        if x is None:
            raise AlgebraError("subspace is not a submodule")
        mats[a.name] = x
    S = Module(A, [s.shape[1] for s in spaces], mats, check=False)
    return S, ModMorphism(S, M, spaces)


def quotient(M: Module, spaces: Sequence[np.ndarray]) -> tuple:
    """Quotient M / S for an invariant per-vertex subspace S, with the projection."""
    A = M.algebra
    F = A.field
    comps, projs = [], []
    for i, s in enumerate(spaces):
        n = M.dims[i]
        s = _cols(s, n)
        s = el.column_space(F, s)
        C = el.complement_basis(F, s, n)
        full = np.hstack([s, C])
        inv = el.inverse(F, full) if n else np.zeros((0, 0), dtype=np.int64)
        comps.append(C)
        projs.append(inv[s.shape[1] :, :])
    mats = {}
    for a in A.quiver.arrows:
        si, ti = A.vertex_index(a.source), A.vertex_index(a.target)
        mats[a.name] = F.mul(projs[ti], F.mul(M.mats[a.name], comps[si])) if comps[si].shape[1] and projs[ti].shape[0] else np.zeros((projs[ti].shape[0], comps[si].shape[1]), dtype=np.int64)
    Q = Module(A, [c.shape[1] for c in comps], mats, check=False)
    return Q, ModMorphism(M, Q, projs)


def kernel(f: ModMorphism) -> tuple:
    F = f.source.algebra.field
    return submodule(f.source, [el.kernel(F, m) if m.shape[1] else np.zeros((0, 0), dtype=np.int64) for m in f.maps])


def image(f: ModMorphism) -> tuple:
    F = f.source.algebra.field
    return submodule(f.target, [el.column_space(F, m) for m in f.maps])


def cokernel(f: ModMorphism) -> tuple:
    F = f.source.algebra.field
    return quotient(f.target, [el.column_space(F, m) for m in f.maps])


def radical_spaces(M: Module) -> list:
    A = M.algebra
    F = A.field
    out = []
    for i, v in enumerate(A.vertices):
        cols = [M.mats[a.name] for a in A.quiver.arrows if a.target == v]
        cols = [c for c in cols if c.shape[1]]
        S = np.hstack(cols) if cols else np.zeros((M.dims[i], 0), dtype=np.int64)
        out.append(el.column_space(F, S))
    return out


def socle_spaces(M: Module) -> list:
    A = M.algebra
    F = A.field
    out = []
    for i, v in enumerate(A.vertices):
        rows = [M.mats[a.name] for a in A.quiver.arrows if a.source == v]
        rows = [r for r in rows if r.shape[0]]
        R = np.vstack(rows) if rows else np.zeros((0, M.dims[i]), dtype=np.int64)
        out.append(el.kernel(F, R) if M.dims[i] else np.zeros((0, 0), dtype=np.int64))
    return out


def radical(M: Module) -> tuple:
    return submodule(M, radical_spaces(M))


def top(M: Module) -> tuple:
    return quotient(M, radical_spaces(M))


def socle(M: Module) -> tuple:
    return submodule(M, socle_spaces(M))


def direct_sum(mods: Sequence[Module], algebra: Optional[Algebra] = None) -> tuple:
    """Direct sum with canonical inclusions and projections."""
    if not mods:
        if algebra is None:
            raise ValueError("empty direct sum needs an algebra")
        Z = zero_module(algebra)
        return Z, [], []
    A = mods[0].algebra
    dims = [sum(m.dims[i] for m in mods) for i in range(A.n_vertices)]
    mats = {a.name: el.block_diag([m.mats[a.name] for m in mods]) for a in A.quiver.arrows}
    S = Module(A, dims, mats, check=False)
    incs, projs = [], []
    starts = [0] * A.n_vertices
    for m in mods:
        im, pm = [], []
        for i in range(A.n_vertices):
            e = np.zeros((dims[i], m.dims[i]), dtype=np.int64)
            e[starts[i] : starts[i] + m.dims[i], :] = np.eye(m.dims[i], dtype=np.int64)
            im.append(e)
            pm.append(e.T.copy())
            starts[i] += m.dims[i]
        incs.append(ModMorphism(m, S, im))
        projs.append(ModMorphism(S, m, pm))
    return S, incs, projs


def morphism_into_sum(source: Module, target: Module, incs, comps) -> ModMorphism:
    out = ModMorphism.zero(source, target)
    for i, c in zip(incs, comps):
        out = out + i.compose(c)
    return out


def zero_module(A: Algebra) -> Module:
    return Module(A, [0] * A.n_vertices, {}, check=False)


# standard modules


def simple(A: Algebra, v) -> Module:
    i = A.vertex_index(v)
    dims = [0] * A.n_vertices
    dims[i] = 1
    return Module(A, dims, {}, check=False).with_name(str(A.vertices[i]))


def _basis_by_ends(A: Algebra):
    out = {}
    for i in range(A.dim):
        out.setdefault((A.source(i), A.target(i)), []).append(i)
    return out


def projective(A: Algebra, v) -> Module:
    """P_v = Λ e_v: paths starting at v, arrows acting by composition."""
    v = A.vertices[A.vertex_index(v)]
    ends = _basis_by_ends(A)
    comp = {u: ends.get((v, u), []) for u in A.vertices}
    mats = {}
    for a in A.quiver.arrows:
        src, tgt = comp[a.source], comp[a.target]
        m = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for j, b in enumerate(src):
            bb = A.basis[b]
            vec = A.reduce((bb[0], bb[1] + (a.name,)))
            for k, c in enumerate(tgt):
                m[k, j] = vec[c]
        mats[a.name] = m
    return Module(A, [len(comp[u]) for u in A.vertices], mats, check=False)


def projective_basis_index(A: Algebra, v) -> dict:
    """Algebra basis index -> (vertex, position) inside P_v."""
    v = A.vertices[A.vertex_index(v)]
    ends = _basis_by_ends(A)
    out = {}
    for u in A.vertices:
        for k, b in enumerate(ends.get((v, u), [])):
            out[b] = (u, k)
    return out


def injective(A: Algebra, v) -> Module:
    """I_v = D(e_v Λ): duals of paths ending at v."""
    v = A.vertices[A.vertex_index(v)]
    ends = _basis_by_ends(A)
    comp = {u: ends.get((u, v), []) for u in A.vertices}
    mats = {}
    for a in A.quiver.arrows:
        src, tgt = comp[a.source], comp[a.target]
        m = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for k, y in enumerate(tgt):
            yb = A.basis[y]
            vec = A.reduce((a.source, (a.name,) + yb[1]))
            for j, z in enumerate(src):
                m[k, j] = vec[z]
        mats[a.name] = m
    return Module(A, [len(comp[u]) for u in A.vertices], mats, check=False)


def standard_module(A: Algebra, kind: str, v) -> Module:
    if kind == "simple":
        return simple(A, v)
    if kind == "projective":
        return projective(A, v)
    if kind == "injective":
        return injective(A, v)
    raise ValueError(f"unknown module kind {kind!r}")


def dual(M: Module, op: Optional[Algebra] = None) -> Module:
    """D M = Hom_k(M, k) as a module over the opposite algebra."""
    B = op or opposite(M.algebra)
    return Module(B, M.dims, {k: m.T for k, m in M.mats.items()}, check=False)


def dual_morphism(f: ModMorphism, Ds: Module, Dt: Module) -> ModMorphism:
    """D f : D target -> D source."""
    return ModMorphism(Dt, Ds, [m.T for m in f.maps])


_OPPOSITES: dict = {}


def opposite(A: Algebra) -> Algebra:
    key = id(A)
    if key not in _OPPOSITES:
        B = A.opposite()
        _OPPOSITES[key] = (A, B)
        _OPPOSITES[id(B)] = (B, A)
    return _OPPOSITES[key][1]


# naming


def loewy_layers(M: Module) -> list:
    """Composition factors of the radical layers, as lists of vertex labels."""
    layers = []
    cur = M
    while cur.dim:
        R, inc = radical(cur)
        topdims = [cur.dims[i] - R.dims[i] for i in range(len(cur.dims))]
        layer = []
        for i, d in enumerate(topdims):
            layer.extend([cur.algebra.vertices[i]] * d)
        layers.append(layer)
        cur = R
    return layers


def loewy_name(M: Module) -> str:
    if M.dim == 0:
        return "0"
    return "/".join(",".join(layer) for layer in loewy_layers(M))


def trace_spaces(M: Module, N: Module) -> list:
    """Per-vertex bases of the trace of M in N (sum of images of all maps M -> N)."""
    F = N.algebra.field
    H = hom_basis(M, N)
    out = []
    for i in range(N.algebra.n_vertices):
        cols = [h.maps[i] for h in H if h.maps[i].shape[1]]
        S = np.hstack(cols) if cols else np.zeros((N.dims[i], 0), dtype=np.int64)
        out.append(el.column_space(F, S))
    return out


def fac_contains(M: Module, N: Module) -> bool:
    """True iff N is a quotient of a finite direct sum of copies of M."""
    return all(s.shape[1] == d for s, d in zip(trace_spaces(M, N), N.dims))
