"""Backend-agnostic layer for Hom-finite Krull-Schmidt triangulated categories.

A backend exposes a finite list of indecomposables (by integer id), a basis of
every Hom space between indecomposables, the structure constants of
composition, and the action of shift and AR translation on ids.  Everything
here (morphisms between direct sums, ideals, approximations, cones) is built
from that data alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .. import exactlin as el
from ..exactlin import Field


class TriCatError(ValueError):
    pass


class Backend:
    """Interface implemented by the stable and orbit backends."""

    kind = "abstract"
    field: Field
    labels: list

    # required
    def hom_dim(self, x: int, y: int) -> int:
        raise NotImplementedError

    def comp(self, x: int, y: int, z: int) -> np.ndarray:
        """C[b, a, c]: (basis b of Hom(y,z)) o (basis a of Hom(x,y)) = sum_c C[b,a,c] e_c."""
        raise NotImplementedError

    def identity(self, x: int) -> np.ndarray:
        raise NotImplementedError

    def shift_label(self, x: int, n: int = 1) -> int:
        raise NotImplementedError

    def tau_label(self, x: int, n: int = 1) -> int:
        raise NotImplementedError

    def functor_on_hom(self, which: str, x: int, y: int) -> np.ndarray:
        raise NotImplementedError

    # derived
    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        if isinstance(label, (int, np.integer)):
            return int(label)
        key = normalize_label(label)
        try:
            return self._label_index[key]
        except (AttributeError, KeyError):
            self._label_index = {normalize_label(l): i for i, l in enumerate(self.labels)}
        if key not in self._label_index:
            key = self.parse_label(key)
        if isinstance(key, int):
            return key
        if key not in self._label_index:
            raise TriCatError(f"unknown object {label!r}")
        return self._label_index[key]

    def parse_label(self, key: str):
        return key

    def name(self, x: int) -> str:
        return self.labels[x]

    def serre_label(self, x: int) -> int:
        return self.shift_label(self.tau_label(x))

    def label_map(self, which: str, x: int) -> int:
        kind, n = _functor_kind(which)
        if kind == "shift":
            return self.shift_label(x, n)
        if kind == "tau":
            return self.tau_label(x, n)
        if kind == "serre":
            y = x
            for _ in range(abs(n)):
                y = self.serre_label(y) if n > 0 else self.tau_label(self.shift_label(y, -1), -1)
            return y
        if kind == "F":
            return x
        raise TriCatError(f"unknown functor {which!r}")


def normalize_label(s: str) -> str:
    s = str(s).strip().replace(" ", "").replace("(", "").replace(")", "")
    return s[:-3] if s.endswith("[0]") else s


def _functor_kind(which: str) -> tuple:
    w = which.strip()
    if w.startswith("shift"):
        rest = w[5:].lstrip("^")
        return "shift", int(rest) if rest else 1
    if w in ("tau", "tau_tri"):
        return "tau", 1
    if w in ("tau_inv", "tau_tri_inv"):
        return "tau", -1
    if w == "serre":
        return "serre", 1
    if w == "F":
        return "F", 1
    raise TriCatError(f"unknown functor {which!r}")


# objects and morphisms


@dataclass(frozen=True)
class TriObject:
    summands: tuple  # ids, order significant for morphism blocks

    @classmethod
    def of(cls, *ids) -> "TriObject":
        if len(ids) == 1 and isinstance(ids[0], (list, tuple)):
            ids = ids[0]
        return cls(tuple(int(i) for i in ids))

    def basic(self) -> "TriObject":
        return TriObject(tuple(sorted(set(self.summands))))

    def __len__(self):
        return len(self.summands)

    def __add__(self, other: "TriObject") -> "TriObject":
        return TriObject(self.summands + other.summands)

    def multiset(self) -> tuple:
        return tuple(sorted(self.summands))


def obj(backend: Backend, labels: Iterable) -> TriObject:
    if isinstance(labels, TriObject):
        return labels
    if isinstance(labels, str):
        labels = [l for l in labels.split("+") if l.strip()]
    return TriObject(tuple(backend.index(l) for l in labels))


def obj_names(backend: Backend, X: TriObject) -> list:
    return [backend.name(i) for i in X.summands]


class TriMorphism:
    """Block matrix of Hom vectors: blocks[t][s] lies in Hom(source[s], target[t])."""

    def __init__(self, B: Backend, source: TriObject, target: TriObject, blocks=None):
        self.B = B
        self.source = source
        self.target = target
        p = B.field.p
        if blocks is None:
            blocks = [[np.zeros(B.hom_dim(s, t), dtype=np.int64) for s in source.summands] for t in target.summands]
        self.blocks = [[np.asarray(b, dtype=np.int64) % p for b in row] for row in blocks]

    @classmethod
    def zero(cls, B: Backend, X: TriObject, Y: TriObject) -> "TriMorphism":
        return cls(B, X, Y)

    @classmethod
    def identity(cls, B: Backend, X: TriObject) -> "TriMorphism":
        f = cls(B, X, X)
        for i, x in enumerate(X.summands):
            f.blocks[i][i] = B.identity(x).copy()
        return f

    def vector(self) -> np.ndarray:
        parts = [b for row in self.blocks for b in row]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    @classmethod
    def from_vector(cls, B: Backend, X: TriObject, Y: TriObject, v: np.ndarray) -> "TriMorphism":
        blocks, k = [], 0
        for t in Y.summands:
            row = []
            for s in X.summands:
                d = B.hom_dim(s, t)
                row.append(v[k : k + d])
                k += d
            blocks.append(row)
        return cls(B, X, Y, blocks)

    def is_zero(self) -> bool:
        return not any(b.any() for row in self.blocks for b in row)

    def __add__(self, other: "TriMorphism") -> "TriMorphism":
        return TriMorphism(
            self.B, self.source, self.target, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.blocks, other.blocks)]
        )

    def scale(self, c: int) -> "TriMorphism":
        return TriMorphism(self.B, self.source, self.target, [[a * c for a in r] for r in self.blocks])

    def compose(self, f: "TriMorphism") -> "TriMorphism":
        """self o f."""
        if f.target.summands != self.source.summands:
            raise TriCatError("morphisms are not composable")
        return tri_compose(self, f)

    def __matmul__(self, f):
        return self.compose(f)


def hom_space_dim(B: Backend, X: TriObject, Y: TriObject) -> int:
    return sum(B.hom_dim(s, t) for s in X.summands for t in Y.summands)


def tri_hom(B: Backend, X: TriObject, Y: TriObject) -> list:
    """Basis of Hom(X, Y): one elementary morphism per (target, source, basis index)."""
    n = hom_space_dim(B, X, Y)
    out = []
    for k in range(n):
        v = np.zeros(n, dtype=np.int64)
        v[k] = 1
        out.append(TriMorphism.from_vector(B, X, Y, v))
    return out


def _compose_vec(B: Backend, x: int, y: int, z: int, g: np.ndarray, f: np.ndarray) -> np.ndarray:
    dxz = B.hom_dim(x, z)
    if dxz == 0 or not g.any() or not f.any():
        return np.zeros(dxz, dtype=np.int64)
    C = B.comp(x, y, z)
    return np.einsum("b,a,bac->c", g, f, C) % B.field.p


def tri_compose(g: TriMorphism, f: TriMorphism) -> TriMorphism:
    B = g.B
    X, Y, Z = f.source, f.target, g.target
    out = TriMorphism(B, X, Z)
    for t, z in enumerate(Z.summands):
        for s, x in enumerate(X.summands):
            acc = out.blocks[t][s]
            for m, y in enumerate(Y.summands):
                acc = (acc + _compose_vec(B, x, y, z, g.blocks[t][m], f.blocks[m][s])) % B.field.p
            out.blocks[t][s] = acc
    return out


def postcompose_matrix(B: Backend, g: TriMorphism, X: TriObject) -> np.ndarray:
    """Matrix of Hom(X, source g) -> Hom(X, target g), h -> g o h."""
    basis = tri_hom(B, X, g.source)
    cols = [g.compose(h).vector() for h in basis]
    return np.stack(cols, axis=1) if cols else np.zeros((hom_space_dim(B, X, g.target), 0), dtype=np.int64)


def precompose_matrix(B: Backend, f: TriMorphism, Z: TriObject) -> np.ndarray:
    """Matrix of Hom(target f, Z) -> Hom(source f, Z), h -> h o f."""
    basis = tri_hom(B, f.target, Z)
    cols = [h.compose(f).vector() for h in basis]
    return np.stack(cols, axis=1) if cols else np.zeros((hom_space_dim(B, f.source, Z), 0), dtype=np.int64)


def apply_functor(B: Backend, which: str, x):
    """Apply shift^n, tau_tri, tau_tri_inv, serre or F to an object or morphism."""
    if isinstance(x, TriObject):
        return TriObject(tuple(B.label_map(which, i) for i in x.summands))
    if isinstance(x, TriMorphism):
        X2 = apply_functor(B, which, x.source)
        Y2 = apply_functor(B, which, x.target)
        blocks = [
            [_functor_block(B, which, s, t, x.blocks[ti][si]) for si, s in enumerate(x.source.summands)]
            for ti, t in enumerate(x.target.summands)
        ]
        return TriMorphism(B, X2, Y2, blocks)
    raise TypeError("apply_functor expects a TriObject or TriMorphism")


def _functor_block(B: Backend, which: str, s: int, t: int, v: np.ndarray) -> np.ndarray:
    if not B.hom_dim(s, t):
        return np.zeros(B.hom_dim(B.label_map(which, s), B.label_map(which, t)), dtype=np.int64)
    return B.field.mul(B.functor_on_hom(which, s, t), v.reshape(-1, 1))[:, 0]


def shift(B: Backend, X: TriObject, n: int = 1) -> TriObject:
    return TriObject(tuple(B.shift_label(i, n) for i in X.summands))


# radicals, ideals, approximations


class HomCache:
    """Per-backend caches of radical maps and ideal slices between indecomposables."""

    def __init__(self, B: Backend):
        self.B = B
        self._rad_end: dict = {}
        self._ideal: dict = {}

    def rad_end(self, x: int) -> np.ndarray:
        """Columns spanning rad End(x): kernel of the trace of left multiplication."""
        if x not in self._rad_end:
            B = self.B
            d = B.hom_dim(x, x)
            C = B.comp(x, x, x)
            # L_b: a -> b o a, matrix C[b, a, c] over (c, a)
            tr = np.array([[int(np.trace(C[b].T) % B.field.p) for b in range(d)]], dtype=np.int64)
            self._rad_end[x] = el.kernel(B.field, tr)
        return self._rad_end[x]

    def rad(self, x: int, y: int) -> np.ndarray:
        if x == y:
            return self.rad_end(x)
        return np.eye(self.B.hom_dim(x, y), dtype=np.int64)

    def ideal(self, x: int, y: int, through: tuple) -> np.ndarray:
        """Columns spanning [add M](x, y) for M the indecomposables in ``through``."""
        key = (x, y, through)
        if key not in self._ideal:
            B = self.B
            d = B.hom_dim(x, y)
            vecs = []
            for m in through:
                a, b = B.hom_dim(x, m), B.hom_dim(m, y)
                if a and b and d:
                    C = B.comp(x, m, y)  # (b, a, c)
                    vecs.append(C.reshape(-1, d).T)
            S = np.hstack(vecs) if vecs else np.zeros((d, 0), dtype=np.int64)
            self._ideal[key] = el.column_space(B.field, S)
        return self._ideal[key]


def hom_cache(B: Backend) -> HomCache:
    if not hasattr(B, "_hom_cache"):
        B._hom_cache = HomCache(B)
    return B._hom_cache


def ideal_dim(B: Backend, X: TriObject, Y: TriObject, through: Sequence[int]) -> int:
    hc = hom_cache(B)
    t = tuple(sorted(set(through)))
    return sum(hc.ideal(x, y, t).shape[1] for x in X.summands for y in Y.summands)


def ideal_basis(B: Backend, X: TriObject, Y: TriObject, through: Sequence[int]) -> list:
    """Basis of [add M](X, Y) as TriMorphisms."""
    hc = hom_cache(B)
    t = tuple(sorted(set(through)))
    out = []
    for ti, y in enumerate(Y.summands):
        for si, x in enumerate(X.summands):
            S = hc.ideal(x, y, t)
            for c in range(S.shape[1]):
                f = TriMorphism(B, X, Y)
                f.blocks[ti][si] = S[:, c].copy()
                out.append(f)
    return out


def in_ideal(B: Backend, f: TriMorphism, through: Sequence[int]) -> bool:
    hc = hom_cache(B)
    t = tuple(sorted(set(through)))
    for ti, y in enumerate(f.target.summands):
        for si, x in enumerate(f.source.summands):
            v = f.blocks[ti][si]
            if v.any() and not el.in_span(B.field, hc.ideal(x, y, t), v):
                return False
    return True


def rigidity(B: Backend, T: TriObject, mode: str = "rigid") -> bool:
    T = T.basic()
    T1 = shift(B, T)
    rigid = hom_space_dim(B, T, T1) == 0
    if mode == "rigid" or not rigid:
        return rigid
    if mode == "maximal_rigid":
        for x in range(B.n):
            if x in T.summands:
                continue
            X = TriObject((x,))
            if B.hom_dim(x, B.shift_label(x)) == 0 and hom_space_dim(B, T, shift(B, X)) == 0 and hom_space_dim(B, X, T1) == 0:
                return False
        return True
    if mode == "cluster_tilting":
        for x in range(B.n):
            left = hom_space_dim(B, T, TriObject((B.shift_label(x),))) == 0
            right = hom_space_dim(B, TriObject((x,)), T1) == 0
            inside = x in T.summands
            if left != inside or right != inside:
                return False
        return True
    raise TriCatError(f"unknown rigidity mode {mode!r}")


@dataclass
class TriApprox:
    map: TriMorphism
    summands: tuple  # ids of the approximating object, in order


def minimal_approx(B: Backend, X: TriObject, U: TriObject, side: str = "right") -> TriApprox:
    """Minimal right (U0 -> X) or left (X -> U0) add(U)-approximation."""
    hc = hom_cache(B)
    F = B.field
    Us = list(U.basic().summands)
    chosen = []
    for j, u in enumerate(Us):
        Uj = TriObject((u,))
        if side == "right":
            H = tri_hom(B, Uj, X)
        else:
            H = tri_hom(B, X, Uj)
        if not H:
            continue
        vecs = []
        for k, w in enumerate(Us):
            Wk = TriObject((w,))
            if side == "right":
                R = hc.rad(u, w)  # radical maps u -> w, then Hom(w, X)
                for c in range(R.shape[1]):
                    r = TriMorphism(B, Uj, Wk, [[R[:, c]]])
                    for h in tri_hom(B, Wk, X):
                        vecs.append(h.compose(r).vector())
            else:
                R = hc.rad(w, u)  # Hom(X, w), then radical w -> u
                for c in range(R.shape[1]):
                    r = TriMorphism(B, Wk, Uj, [[R[:, c]]])
                    for h in tri_hom(B, X, Wk):
                        vecs.append(r.compose(h).vector())
        S = np.stack(vecs, axis=1) if vecs else np.zeros((len(H), 0), dtype=np.int64)
        Cb = el.complement_basis(F, el.column_space(F, S), len(H))
        for c in range(Cb.shape[1]):
            chosen.append((u, Cb[:, c]))
    U0 = TriObject(tuple(u for u, _ in chosen))
    if side == "right":
        f = TriMorphism(B, U0, X)
        for i, (u, v) in enumerate(chosen):
            g = TriMorphism.from_vector(B, TriObject((u,)), X, v)
            for t in range(len(X)):
                f.blocks[t][i] = g.blocks[t][0]
    else:
        f = TriMorphism(B, X, U0)
        for i, (u, v) in enumerate(chosen):
            g = TriMorphism.from_vector(B, X, TriObject((u,)), v)
            f.blocks[i] = g.blocks[0]
    return TriApprox(f, U0.summands)


def is_approximation(B: Backend, f: TriMorphism, U: TriObject, side: str) -> bool:
    F = B.field
    for u in U.basic().summands:
        Uj = TriObject((u,))
        if side == "right":
            n = hom_space_dim(B, Uj, f.target)
            M = postcompose_matrix(B, f, Uj)
        else:
            n = hom_space_dim(B, f.source, Uj)
            M = precompose_matrix(B, f, Uj)
        if n and el.rank(F, M) < n:
            return False
    return True


def drop_summand(f: TriMorphism, k: int, side: str) -> TriMorphism:
    B = f.B
    if side == "right":
        keep = [i for i in range(len(f.source)) if i != k]
        S = TriObject(tuple(f.source.summands[i] for i in keep))
        return TriMorphism(B, S, f.target, [[row[i] for i in keep] for row in f.blocks])
    keep = [i for i in range(len(f.target)) if i != k]
    T = TriObject(tuple(f.target.summands[i] for i in keep))
    return TriMorphism(B, f.source, T, [f.blocks[i] for i in keep])


def is_minimal_approximation(B: Backend, f: TriMorphism, U: TriObject, side: str) -> bool:
    if not is_approximation(B, f, U, side):
        return False
    n = len(f.source) if side == "right" else len(f.target)
    return not any(is_approximation(B, drop_summand(f, k, side), U, side) for k in range(n))


# cones


@dataclass
class Triangle:
    X: TriObject
    Y: TriObject
    Z: TriObject
    f: TriMorphism  # X -> Y
    g: TriMorphism  # Y -> Z
    h: TriMorphism  # Z -> X[1]


def _rank(F, M) -> int:
    return el.rank(F, M) if M.size else 0


def cone_dims(B: Backend, f: TriMorphism) -> tuple:
    """(dim Hom(W, C), dim Hom(C, W)) for every indecomposable W, from the long exact sequences."""
    F = B.field
    X, Y = f.source, f.target
    din, dout = [], []
    for w in range(B.n):
        W = TriObject((w,))
        Wm = TriObject((B.shift_label(w, -1),))
        a = postcompose_matrix(B, f, W)  # Hom(W,X) -> Hom(W,Y)
        b = postcompose_matrix(B, f, Wm)  # Hom(W[-1],X) -> Hom(W[-1],Y)
        din.append(hom_space_dim(B, W, Y) - _rank(F, a) + hom_space_dim(B, Wm, X) - _rank(F, b))
        c = precompose_matrix(B, f, W)  # Hom(Y,W) -> Hom(X,W)
        d = precompose_matrix(B, f, Wm)  # Hom(Y,W[-1]) -> Hom(X,W[-1])
        dout.append(hom_space_dim(B, Y, W) - _rank(F, c) + hom_space_dim(B, X, Wm) - _rank(F, d))
    return np.array(din), np.array(dout)


def hom_dim_matrix(B: Backend) -> np.ndarray:
    if not hasattr(B, "_hom_dim_matrix"):
        B._hom_dim_matrix = np.array([[B.hom_dim(w, v) for v in range(B.n)] for w in range(B.n)])
    return B._hom_dim_matrix


def solve_multiplicities(B: Backend, din: np.ndarray, dout: np.ndarray) -> Optional[np.ndarray]:
    """Unique nonnegative integer m with H m = din and H^T m = dout, or None if not determined."""
    H = hom_dim_matrix(B)
    A = np.vstack([H, H.T])
    b = np.concatenate([din, dout])
    sol = _rational_solve(A, b)
    if sol is None:
        return None
    if any(x.denominator != 1 or x < 0 for x in sol):
        return None
    return np.array([int(x) for x in sol])


def _rational_solve(A: np.ndarray, b: np.ndarray) -> Optional[list]:
    """Unique solution of A x = b over Q, or None if inconsistent or underdetermined."""
    rows, cols = A.shape
    M = [[Fraction(int(A[i, j])) for j in range(cols)] + [Fraction(int(b[i]))] for i in range(rows)]
    piv = []
    r = 0
    for c in range(cols):
        k = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                fac = M[i][c]
                M[i] = [x - fac * y for x, y in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    if any(all(x == 0 for x in M[i][:cols]) and M[i][cols] != 0 for i in range(rows)):
        return None
    if len(piv) < cols:
        return None
    return [M[i][cols] for i in range(cols)]


def cone_object(B: Backend, f: TriMorphism) -> TriObject:
    din, dout = cone_dims(B, f)
    m = solve_multiplicities(B, din, dout)
    if m is None:
        if hasattr(B, "lift_cone_object"):
            return B.lift_cone_object(f)
        raise TriCatError("cone not determined by Hom dimensions")
    return TriObject(tuple(i for i in range(B.n) for _ in range(int(m[i]))))


def _random_in_kernel(F, K: np.ndarray, rng) -> np.ndarray:
    if K.shape[1] == 0:
        return np.zeros(K.shape[0], dtype=np.int64)
    c = rng.integers(1, F.p, size=K.shape[1])
    return F.mul(K, c.reshape(-1, 1))[:, 0]


def exact_at(B: Backend, f: TriMorphism, g: TriMorphism) -> bool:
    """Both Hom(W, -) and Hom(-, W) turn f, g into sequences exact in the middle, for every W."""
    F = B.field
    for w in range(B.n):
        W = TriObject((w,))
        a = postcompose_matrix(B, f, W)
        b = postcompose_matrix(B, g, W)
        if a.size and b.size and F.mul(b, a).any():
            return False
        if _rank(F, a) != hom_space_dim(B, W, g.source) - _rank(F, b):
            return False
        c = precompose_matrix(B, g, W)  # Hom(Z, W) -> Hom(Y, W)
        d = precompose_matrix(B, f, W)  # Hom(Y, W) -> Hom(X, W)
        if _rank(F, c) != hom_space_dim(B, g.source, W) - _rank(F, d):
            return False
    return True


def complete_triangle(B: Backend, f: TriMorphism, C: TriObject, seed: int = 7, tries: int = 8) -> Triangle:
    """Find g: Y -> C, h: C -> X[1] making X -> Y -> C -> X[1] exact under every Hom(W, -)."""
    F = B.field
    X, Y = f.source, f.target
    X1 = shift(B, X)
    rng = np.random.default_rng(seed)
    Pg = precompose_matrix(B, f, C)  # Hom(Y,C) -> Hom(X,C)
    Kg = el.kernel(F, Pg) if Pg.shape[0] else np.eye(hom_space_dim(B, Y, C), dtype=np.int64)
    f1 = apply_functor(B, "shift", f)
    for _ in range(tries):
        g = TriMorphism.from_vector(B, Y, C, _random_in_kernel(F, Kg, rng))
        # h o g = 0 and f[1] o h = 0
        Ph = np.vstack([precompose_matrix(B, g, X1), postcompose_matrix(B, f1, C)])
        Kh = el.kernel(F, Ph) if Ph.shape[0] else np.eye(hom_space_dim(B, C, X1), dtype=np.int64)
        h = TriMorphism.from_vector(B, C, X1, _random_in_kernel(F, Kh, rng))
        if exact_at(B, f, g) and exact_at(B, g, h) and exact_at(B, h, f1):
            return Triangle(X, Y, C, f, g, h)
    raise TriCatError("could not certify triangle maps")


def check_triangle(B: Backend, tri: Triangle) -> bool:
    f1 = apply_functor(B, "shift", tri.f)
    return (
        tri.g.compose(tri.f).is_zero()
        and tri.h.compose(tri.g).is_zero()
        and f1.compose(tri.h).is_zero()
        and exact_at(B, tri.f, tri.g)
        and exact_at(B, tri.g, tri.h)
        and exact_at(B, tri.h, f1)
    )


def cone(B: Backend, f: TriMorphism) -> Triangle:
    if hasattr(B, "cone"):
        return B.cone(f)
    return complete_triangle(B, f, cone_object(B, f))


def canonical_T_triangle(B: Backend, X: TriObject, T: TriObject) -> tuple:
    """T0 -> X -> T1[1] -> T0[1] from the minimal right add(T)-approximation."""
    app = minimal_approx(B, X, T, "right")
    tri = cone(B, app.map)
    T1 = shift(B, tri.Z, -1)
    if not all(t in T.summands for t in T1.summands) or not all(t in T.summands for t in app.summands):
        raise TriCatError("canonical triangle does not have both ends in add T")
    return tri, TriObject(app.summands), T1
