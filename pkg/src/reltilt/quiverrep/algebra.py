"""Quivers and finite-dimensional quotients of path algebras.

Conventions
-----------
Paths are stored in *diagram order*: ``(start, ("a", "b"))`` is the path
that follows arrow ``a`` and then arrow ``b``.  The algebra product uses
function-composition order, so ``x * y`` is "first y, then x" and is nonzero
only when y ends where x starts.  A basis element b therefore satisfies
``b = e_target * b * e_source``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ..exactlin import Field, rref

Path = tuple  # (start_vertex, tuple_of_arrow_names)

CONVENTION_NOTE = (
    "relation strings list arrows left-to-right in diagram order; "
    "internally a*b means 'b after a' is stored as the path (a, b), "
    "and the algebra product x*y composes y first, then x"
)


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple  # of Arrow

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise AlgebraError("duplicate vertex labels")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("arrow names must be unique")
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise AlgebraError(f"arrow {a.name} has undeclared endpoint")

    @classmethod
    def from_lists(cls, vertices: Sequence, arrows: Iterable) -> "Quiver":
        arr = []
        for a in arrows:
            if isinstance(a, Arrow):
                arr.append(a)
            elif isinstance(a, Mapping):
                arr.append(Arrow(str(a["name"]), str(a["from"]), str(a["to"])))
            else:
                arr.append(Arrow(str(a[0]), str(a[1]), str(a[2])))
        return cls(tuple(str(v) for v in vertices), tuple(arr))

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def out_arrows(self, v: str) -> list:
        return [a for a in self.arrows if a.source == v]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))

    def path_target(self, path: Path) -> str:
        v, arrows = path
        for name in arrows:
            a = self.arrow(name)
            if a.source != v:
                raise AlgebraError(f"path {path} is not composable at {name}")
            v = a.target
        return v

    def paths_of_length(self, n: int) -> list:
        cur = [(v, ()) for v in self.vertices]
        for _ in range(n):
            nxt = []
            for s, arr in cur:
                t = self.path_target((s, arr))
                for a in self.out_arrows(t):
                    nxt.append((s, arr + (a.name,)))
            cur = nxt
        return cur


def _path_str(path: Path) -> str:
    s, arr = path
    return "*".join(arr) if arr else f"e_{s}"


def parse_relation(text: str, quiver: Quiver, p: int) -> dict:
    """Parse ``"a*b - 2*c*d"`` into ``{path: coefficient}`` (diagram order)."""
    terms = {}
    s = text.replace(" ", "")
    if not s:
        raise AlgebraError("empty relation")
    if s[0] not in "+-":
        s = "+" + s
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        factors = body.split("*")
        coef = 1
        if factors and re.fullmatch(r"\d+", factors[0]):
            coef = int(factors[0])
            factors = factors[1:]
        if not factors:
            raise AlgebraError(f"term '{body}' in relation '{text}' has no arrows")
        try:
            first = quiver.arrow(factors[0])
        except KeyError:
            raise AlgebraError(f"unknown arrow '{factors[0]}' in relation '{text}'") from None
        for f in factors:
            if f not in {a.name for a in quiver.arrows}:
                raise AlgebraError(f"unknown arrow '{f}' in relation '{text}'")
        path = (first.source, tuple(factors))
        quiver.path_target(path)
        c = coef if sign == "+" else -coef
        terms[path] = (terms.get(path, 0) + c) % p
    return {k: v for k, v in terms.items() if v}


@dataclass
class Algebra:
    """kQ/I with a monomial basis and multiplication by path reduction."""

    field: Field
    quiver: Quiver
    relations: tuple  # of {path: coef}
    basis: tuple  # of Path
    truncation: int  # every path of this length lies in I
    _reducer: dict = field(repr=False, default_factory=dict)
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple:
        return self.quiver.vertices

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    def vertex_index(self, v) -> int:
        v = str(v)
        try:
            return self.quiver.vertices.index(v)
        except ValueError:
            raise AlgebraError(f"unknown vertex {v!r}") from None

    def source(self, i: int) -> str:
        return self.basis[i][0]

    def target(self, i: int) -> str:
        return self.quiver.path_target(self.basis[i])

    def reduce(self, path: Path) -> np.ndarray:
        """Coordinates of a path in the basis (paths in I reduce to 0)."""
        if len(path[1]) >= self.truncation:
            return np.zeros(self.dim, dtype=np.int64)
        return self._reducer[path]

    def basis_product(self, i: int, j: int) -> np.ndarray:
        """b_i * b_j (b_j first)."""
        if self.target(j) != self.source(i):
            return np.zeros(self.dim, dtype=np.int64)
        bi, bj = self.basis[i], self.basis[j]
        return self.reduce((bj[0], bj[1] + bi[1]))

    def multiply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(x)[0]:
            for j in np.nonzero(y)[0]:
                out = (out + x[i] * y[j] * self.basis_product(int(i), int(j))) % self.field.p
        return out

    def idempotent(self, v) -> int:
        v = str(v)
        return self.basis.index((v, ()))

    def is_associative(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    ij = self.basis_product(i, j)
                    jk = self.basis_product(j, k)
                    e = np.zeros(n, dtype=np.int64)
                    e[k] = 1
                    e2 = np.zeros(n, dtype=np.int64)
                    e2[i] = 1
                    if not np.array_equal(self.multiply(ij, e), self.multiply(e2, jk)):
                        return False
        return True

    def basis_str(self) -> list:
        return [_path_str(b) for b in self.basis]

    def opposite(self) -> "Algebra":
        """The opposite algebra on the reversed quiver (arrow names kept)."""
        q = self.quiver.opposite()

        def rev(path):
            s, arr = path
            t = self.quiver.path_target(path)
            return (t, tuple(reversed(arr)))

        rels = tuple({rev(k): v for k, v in r.items()} for r in self.relations)
        basis = tuple(rev(b) for b in self.basis)
        reducer = {rev(k): v for k, v in self._reducer.items()}
        # same index order, so coordinates carry over unchanged
        return Algebra(self.field, q, rels, basis, self.truncation, reducer, name=(self.name + "^op") if self.name else "")

    def metadata(self) -> dict:
        return {
            "field": self.field.p,
            "dim": self.dim,
            "vertices": list(self.vertices),
            "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in self.quiver.arrows],
            "basis": self.basis_str(),
            "convention": CONVENTION_NOTE,
        }


def build_algebra(
    quiver: Quiver,
    relations: Sequence,
    field: Optional[Field] = None,
    length_cap: int = 30,
    name: str = "",
) -> Algebra:
    """Quotient of the path algebra kQ by the ideal generated by ``relations``.

    ``relations`` holds strings (diagram order, see :func:`parse_relation`) or
    ``{path: coef}`` dicts.  Each generator must be a combination of parallel
    paths of length >= 2.
    """
    F = field or Field()
    p = F.p
    rels = []
    for r in relations:
        d = parse_relation(r, quiver, p) if isinstance(r, str) else {k: v % p for k, v in r.items() if v % p}
        if not d:
            continue
        ends = {(k[0], quiver.path_target(k)) for k in d}
        if len(ends) != 1:
            raise AlgebraError(f"relation {r!r} is not a combination of parallel paths")
        if any(len(k[1]) < 2 for k in d):
            raise AlgebraError(f"relation {r!r} is not admissible (contains a path of length < 2)")
        rels.append(d)

    for N in range(1, length_cap + 1):
        paths = []
        for L in range(N, -1, -1):
            paths.extend(sorted(quiver.paths_of_length(L), reverse=True))
        if len(paths) > 20000:
            raise AlgebraError("path space too large; possibly infinite-dimensional")
        index = {pt: i for i, pt in enumerate(paths)}
        gens = []
        all_L = {L: quiver.paths_of_length(L) for L in range(N + 1)}
        for r in rels:
            rlen = min(len(k[1]) for k in r)
            s0 = next(iter(r))[0]
            t0 = quiver.path_target(next(iter(r)))
            for La in range(N - rlen + 1):
                for pre in all_L[La]:
                    if quiver.path_target(pre) != s0:
                        continue
                    for Lb in range(N - rlen - La + 1):
                        for post in all_L[Lb]:
                            if post[0] != t0:
                                continue
                            row = np.zeros(len(paths), dtype=np.int64)
                            for k, c in r.items():
                                full = (pre[0], pre[1] + k[1] + post[1])
                                if len(full[1]) <= N:
                                    row[index[full]] = (row[index[full]] + c) % p
                            if row.any():
                                gens.append(row)
        top = [pt for pt in paths if len(pt[1]) == N]
        if not top:
            ok = True
        else:
            G = np.array(gens, dtype=np.int64).reshape(-1, len(paths))
            r0 = len(rref(F, G)[1]) if G.size else 0
            extra = np.zeros((len(top), len(paths)), dtype=np.int64)
            for i, pt in enumerate(top):
                extra[i, index[pt]] = 1
            r1 = len(rref(F, np.vstack([G, extra]))[1])
            ok = r0 == r1
        if ok:
            return _finish(F, quiver, rels, paths, index, gens, top, N, name)
    raise AlgebraError(f"paths survive at length {length_cap}; possibly infinite-dimensional")


def _finish(F, quiver, rels, paths, index, gens, top, N, name):
    p = F.p
    rows = list(gens)
    for pt in top:
        r = np.zeros(len(paths), dtype=np.int64)
        r[index[pt]] = 1
        rows.append(r)
    G = np.array(rows, dtype=np.int64).reshape(-1, len(paths))
    R, piv = rref(F, G) if G.size else (G, ())
    pivset = set(piv)
    free = [i for i in range(len(paths)) if i not in pivset]
    # smallest paths first in the exposed basis
    free_sorted = sorted(free, key=lambda i: (len(paths[i][1]), quiver.vertices.index(paths[i][0]), paths[i][1]))
    basis = tuple(paths[i] for i in free_sorted)
    pos = {i: k for k, i in enumerate(free_sorted)}
    reducer = {}
    for i, pt in enumerate(paths):
        if len(pt[1]) >= N:
            continue
        v = np.zeros(len(paths), dtype=np.int64)
        v[i] = 1
        for ri, c in enumerate(piv):
            if v[c]:
                v = (v - v[c] * R[ri]) % p
        coords = np.zeros(len(basis), dtype=np.int64)
        for j in np.nonzero(v)[0]:
            coords[pos[int(j)]] = v[j]
        reducer[pt] = coords
    return Algebra(F, quiver, tuple(rels), basis, N, reducer, name=name)


def algebra_from_descriptor(desc: Mapping, field: Optional[Field] = None, length_cap: int = 30) -> Algebra:
    """Load the JSON algebra descriptor ``{"field", "vertices", "arrows", "relations"}``."""
    for key in ("vertices", "arrows"):
        if key not in desc:
            raise AlgebraError(f"descriptor missing field '{key}'")
    F = field or Field(int(desc.get("field", 101)))
    arrows = desc["arrows"]
    for i, a in enumerate(arrows):
        for k in ("name", "from", "to"):
            if k not in a:
                raise AlgebraError(f"arrows[{i}] missing field '{k}'")
    q = Quiver.from_lists(desc["vertices"], arrows)
    return build_algebra(q, desc.get("relations", []), F, length_cap, name=desc.get("name", ""))


def disjoint_union(A: Algebra, B: Algebra, rename_a: Mapping, rename_b: Mapping, name: str = "") -> Algebra:
    """Product algebra A x B given vertex/arrow renamings keeping labels distinct."""
    def ren(alg, m):
        vs = [m.get(v, v) for v in alg.vertices]
        arr = [Arrow(m.get(a.name, a.name), m.get(a.source, a.source), m.get(a.target, a.target)) for a in alg.quiver.arrows]
        rels = []
        for r in alg.relations:
            rels.append({(m.get(k[0], k[0]), tuple(m.get(x, x) for x in k[1])): c for k, c in r.items()})
        return vs, arr, rels

    va, aa, ra = ren(A, rename_a)
    vb, ab, rb = ren(B, rename_b)
    q = Quiver(tuple(va + vb), tuple(aa + ab))
    return build_algebra(q, ra + rb, A.field, name=name)
