"""Orbit categories D^b(kQ)/F of a Dynkin quiver, with F = tau^{-a}[b].

Indecomposables of D^b(kQ) are the vertices (n, v) of the translation quiver
ZQ, with (0, v) the projective P_v.  A Q-arrow u -> v gives arrows
(n, v) -> (n, u) and (n, u) -> (n+1, v), and tau(n, v) = (n-1, v).  Hom
spaces are computed in the mesh category by knitting from the source: each
Hom(x, y) is the cokernel of the mesh map out of Hom(x, tau y).  All mesh
signs are +1.  Every knitted basis vector is a standard complement vector,
so it is represented by a single path, and composing with a morphism means
pushing a vector along that morphism's path.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .. import exactlin as el
from ..quiverrep.algebra import Algebra
from ..quiverrep.ar import indecomposables
from .base import Backend, TriCatError, _functor_kind, normalize_label

Vertex = tuple  # (n, v)


def is_dynkin(A: Algebra) -> bool:
    """Underlying graph has positive definite symmetric Tits form."""
    n = A.n_vertices
    S = 2 * np.eye(n)
    for a in A.quiver.arrows:
        i, j = A.vertex_index(a.source), A.vertex_index(a.target)
        S[i, j] -= 1
        S[j, i] -= 1
    return bool(np.all(np.linalg.eigvalsh(S) > 1e-9))


class Knitting:
    """Hom(x, -) on ZQ with a path representative for every basis vector."""

    def __init__(self, B: "OrbitBackend", x: Vertex):
        self.x = x
        self.dim: dict = {x: 1}
        self.arrow: dict = {}  # (z, y) -> matrix V_y x V_z
        self.paths: dict = {x: [(x,)]}
        F = B.field
        n0, w0 = x
        n = n0
        while True:
            nonzero = False
            for w in B.order:
                y = (n, w)
                if n == n0 and B.rank[w] <= B.rank[w0]:
                    continue
                preds = [z for z in B.preds(y) if self.dim.get(z, 0)]
                W = sum(self.dim[z] for z in preds)
                if W == 0:
                    continue
                t = (n - 1, w)
                blocks = []
                for z in preds:
                    m = self.arrow.get((t, z))
                    blocks.append(m if m is not None else np.zeros((self.dim[z], self.dim.get(t, 0)), dtype=np.int64))
                M = np.vstack(blocks) if self.dim.get(t, 0) else np.zeros((W, 0), dtype=np.int64)
                Mb = el.column_space(F, M) if M.size else np.zeros((W, 0), dtype=np.int64)
                C = el.complement_basis(F, Mb, W)
                k = C.shape[1]
                if k == 0:
                    continue
                R = el.inverse(F, np.hstack([C, Mb]))[:k, :]
                off, owner = 0, []
                for z in preds:
                    d = self.dim[z]
                    self.arrow[(z, y)] = R[:, off : off + d]
                    owner += [(z, l) for l in range(d)]
                    off += d
                self.dim[y] = k
                self.paths[y] = []
                for c in range(k):
                    z, l = owner[int(np.nonzero(C[:, c])[0][0])]
                    self.paths[y].append(self.paths[z][l] + (y,))
                nonzero = True
            if n > n0 and not nonzero:
                break
            n += 1
            if n - n0 > 4 * len(B.order) + 8:
                raise TriCatError("knitting did not terminate; quiver is not Dynkin")
        self.n_last = n

    def push(self, B: "OrbitBackend", v: np.ndarray, path: tuple) -> np.ndarray:
        """Post-compose the element v of Hom(x, path[0]) with the path."""
        if self.dim.get(path[0], 0) == 0:
            return np.zeros(self.dim.get(path[-1], 0), dtype=np.int64)
        for p, q in zip(path, path[1:]):
            m = self.arrow.get((p, q))
            if m is None:
                return np.zeros(self.dim.get(path[-1], 0), dtype=np.int64)
            v = B.field.mul(m, v.reshape(-1, 1))[:, 0]
        return v


class OrbitBackend(Backend):
    kind = "orbit"

    def __init__(self, algebra: Algebra, a: int, b: int):
        if algebra.relations:
            raise TriCatError("orbit backend needs a path algebra without relations")
        if not is_dynkin(algebra):
            raise TriCatError("quiver is not of Dynkin type")
        if a < 0 or b < 1:
            raise TriCatError("need tau_power >= 0 and shift_power >= 1")
        self.algebra = algebra
        self.field = algebra.field
        self.a, self.b = int(a), int(b)
        Q = algebra.quiver
        self.verts = list(algebra.vertices)
        self.out = {v: [] for v in self.verts}
        self.inc = {v: [] for v in self.verts}
        for ar in Q.arrows:
            self.out[ar.source].append(ar.target)
            self.inc[ar.target].append(ar.source)
        self.order = self._sink_first()
        self.rank = {v: i for i, v in enumerate(self.order)}
        self._knit: dict = {}
        self.cat = indecomposables(algebra)
        self._locate_modules()
        self._build_objects()
        self._homb: dict = {}
        self._comp: dict = {}
        self._fmat: dict = {}

    # ZQ combinatorics

    def _sink_first(self) -> list:
        done, order = set(), []
        while len(order) < len(self.verts):
            for v in self.verts:
                if v not in done and all(u in done for u in self.out[v]):
                    done.add(v)
                    order.append(v)
                    break
            else:
                raise TriCatError("quiver has an oriented cycle")
        return order

    def preds(self, y: Vertex) -> list:
        n, w = y
        return [(n - 1, u) for u in self.inc[w]] + [(n, v) for v in self.out[w]]

    def knitting(self, x: Vertex) -> Knitting:
        if x not in self._knit:
            self._knit[x] = Knitting(self, x)
        return self._knit[x]

    def _locate_modules(self):
        """Module vertices by dimension vector, and the shift automorphism psi."""
        dimvec: dict = {}
        for i, u in enumerate(self.verts):
            K = self.knitting((0, u))
            for y, d in K.dim.items():
                dimvec.setdefault(y, [0] * len(self.verts))[i] = d
        self.module_vertex: dict = {}  # catalogue id -> vertex
        self.vertex_module: dict = {}
        by_dims = {tuple(m.dims): c for c, m in enumerate(self.cat.modules)}
        for y, dv in dimvec.items():
            c = by_dims.get(tuple(dv))
            if c is None:
                raise TriCatError(f"no indecomposable with dimension vector {dv}")
            self.module_vertex[c] = y
            self.vertex_module[y] = c
        if len(self.module_vertex) != len(self.cat):
            raise TriCatError("module region of ZQ does not match the catalogue")
        self.psi_shift: dict = {}
        self.psi_perm: dict = {}
        for v in self.verts:
            n, w = self.module_vertex[self.cat.injective[v]]
            self.psi_shift[v] = n + 1
            self.psi_perm[v] = w
        self.psi_inv_perm = {w: v for v, w in self.psi_perm.items()}
        self.n_max = max(y[0] for y in self.vertex_module)

    def psi(self, y: Vertex, k: int = 1) -> Vertex:
        n, v = y
        for _ in range(abs(k)):
            if k > 0:
                n, v = n + self.psi_shift[v], self.psi_perm[v]
            else:
                u = self.psi_inv_perm[v]
                n, v = n - self.psi_shift[u], u
        return (n, v)

    def tau_v(self, y: Vertex, k: int = 1) -> Vertex:
        return (y[0] - k, y[1])

    def F(self, y: Vertex, k: int = 1) -> Vertex:
        for _ in range(abs(k)):
            if k > 0:
                y = self.psi(self.tau_v(y, -self.a), self.b)
            else:
                y = self.tau_v(self.psi(y, -self.b), self.a)
        return y

    def module_and_shift(self, y: Vertex) -> tuple:
        s = 0
        for _ in range(10000):
            if y in self.vertex_module:
                return self.vertex_module[y], s
            if y[0] < 0:
                y, s = self.psi(y, 1), s - 1
            else:
                y, s = self.psi(y, -1), s + 1
        raise TriCatError("could not place vertex in a shifted module region")

    def canonical(self, y: Vertex) -> tuple:
        """(representative, k) with representative = F^k y of least nonnegative shift."""
        k = 0
        while self.module_and_shift(self.F(y, k))[1] < 0:
            k += 1
        while self.module_and_shift(self.F(y, k - 1))[1] >= 0:
            k -= 1
        return self.F(y, k), k

    def vertex_label(self, y: Vertex) -> str:
        c, s = self.module_and_shift(y)
        name = self.cat.name(c)
        return name if s == 0 else f"{name}[{s}]"

    def _build_objects(self):
        reps = set()
        for c in range(len(self.cat)):
            for s in range(self.a + self.b + 1):
                reps.add(self.canonical(self.psi(self.module_vertex[c], s))[0])
        reps = sorted(reps, key=lambda y: (self.module_and_shift(y)[1], self.module_and_shift(y)[0]))
        self.vertex_of = reps
        self.id_of_vertex = {y: i for i, y in enumerate(reps)}
        self.labels = [self.vertex_label(y) for y in reps]

    def parse_label(self, key: str):
        key = normalize_label(key)
        name, s = key, 0
        if key.endswith("]") and "[" in key:
            name, sh = key[:-1].rsplit("[", 1)
            s = int(sh)
        try:
            c = self.cat.id_of(name)
        except KeyError:
            raise TriCatError(f"unknown object {key!r}")
        return self.id_of(self.psi(self.module_vertex[c], s))

    def id_of(self, y: Vertex) -> int:
        return self.id_of_vertex[self.canonical(y)[0]]

    # label maps

    def shift_label(self, x: int, n: int = 1) -> int:
        return self.id_of(self.psi(self.vertex_of[x], n))

    def tau_label(self, x: int, n: int = 1) -> int:
        return self.id_of(self.tau_v(self.vertex_of[x], n))

    def _vertex_map(self, which: str):
        kind, n = _functor_kind(which)
        if kind == "shift":
            return lambda y: self.psi(y, n)
        if kind == "tau":
            return lambda y: self.tau_v(y, n)
        if kind == "serre":
            return lambda y: self.psi(self.tau_v(y, n), n)
        return lambda y: self.F(y, 1)

    # Hom spaces

    def hom_basis(self, x: int, y: int) -> list:
        """[(degree i, index j, path)] spanning the sum over i of Hom(x, F^i y)."""
        key = (x, y)
        if key not in self._homb:
            cx, cy = self.vertex_of[x], self.vertex_of[y]
            K = self.knitting(cx)
            i = 0
            while self.F(cy, i)[0] >= cx[0]:
                i -= 1
            out = []
            while self.F(cy, i)[0] <= K.n_last:
                t = self.F(cy, i)
                for j in range(K.dim.get(t, 0)):
                    out.append((i, j, K.paths[t][j]))
                i += 1
            self._homb[key] = out
        return self._homb[key]

    def hom_dim(self, x: int, y: int) -> int:
        return len(self.hom_basis(x, y))

    def _coords(self, x: int, y: int, degree: int, v: np.ndarray) -> np.ndarray:
        basis = self.hom_basis(x, y)
        out = np.zeros(len(basis), dtype=np.int64)
        if not v.any():
            return out
        pos = [k for k, (i, _, _) in enumerate(basis) if i == degree]
        if len(pos) != len(v):
            raise TriCatError("composite lands outside the knitted Hom space")
        out[pos] = v
        return out

    def comp(self, x: int, y: int, z: int) -> np.ndarray:
        key = (x, y, z)
        if key not in self._comp:
            cx = self.vertex_of[x]
            K = self.knitting(cx)
            Bxy, Byz = self.hom_basis(x, y), self.hom_basis(y, z)
            C = np.zeros((len(Byz), len(Bxy), self.hom_dim(x, z)), dtype=np.int64)
            for bi, (i2, _, p2) in enumerate(Byz):
                for ai, (i1, j1, p1) in enumerate(Bxy):
                    q = tuple(self.F(u, i1) for u in p2)
                    e = np.zeros(K.dim[p1[-1]], dtype=np.int64)
                    e[j1] = 1
                    C[bi, ai] = self._coords(x, z, i1 + i2, K.push(self, e, q))
            self._comp[key] = C
        return self._comp[key]

    def identity(self, x: int) -> np.ndarray:
        return self._coords(x, x, 0, np.ones(1, dtype=np.int64))

    def functor_on_hom(self, which: str, x: int, y: int) -> np.ndarray:
        key = (which, x, y)
        if key not in self._fmat:
            phi = self._vertex_map(which)
            cx2, kx = self.canonical(phi(self.vertex_of[x]))
            cy2, ky = self.canonical(phi(self.vertex_of[y]))
            x2, y2 = self.id_of_vertex[cx2], self.id_of_vertex[cy2]
            K = self.knitting(cx2)
            cols = []
            for i, _, p in self.hom_basis(x, y):
                q = tuple(self.F(phi(u), kx) for u in p)
                if q[0] != cx2:
                    raise TriCatError("functor does not commute with F")
                cols.append(self._coords(x2, y2, i + kx - ky, K.push(self, np.ones(1, dtype=np.int64), q)))
            M = np.stack(cols, axis=1) if cols else np.zeros((self.hom_dim(x2, y2), 0), dtype=np.int64)
            self._fmat[key] = M
        return self._fmat[key]

    def ar_arrows(self) -> list:
        """Irreducible maps between objects: (source id, target id)."""
        out = set()
        for x, y in enumerate(self.vertex_of):
            n, w = y
            succ = [(n, u) for u in self.inc[w]] + [(n + 1, v) for v in self.out[w]]
            for z in succ:
                out.add((x, self.id_of(z)))
        return sorted(out)

    def degree_of(self, x: int, y: int, k: int) -> int:
        return self.hom_basis(x, y)[k][0]

    # cones through a lift to D^b(kQ)

    def lift(self, f) -> Optional[tuple]:
        """Lift a morphism to D^b: (source vertices, target vertices, blocks) or None.

        Needs every nonzero component homogeneous, with degrees of the form
        e_t - d_s for some shifts d of the sources and e of the targets.
        """
        S, T = f.source.summands, f.target.summands
        deg = {}
        for t, y in enumerate(T):
            for s, x in enumerate(S):
                v = f.blocks[t][s]
                ds = {self.hom_basis(x, y)[k][0] for k in np.nonzero(v)[0]}
                if len(ds) > 1:
                    return None
                if ds:
                    deg[(t, s)] = ds.pop()
        d_src: dict = {}
        e_tgt: dict = {}
        for s0 in range(len(S)):
            if s0 in d_src:
                continue
            d_src[s0] = 0
            stack = [("s", s0)]
            while stack:
                side, k = stack.pop()
                for (t, s), i in deg.items():
                    if side == "s" and s == k:
                        want = d_src[s] + i
                        if t in e_tgt and e_tgt[t] != want:
                            return None
                        if t not in e_tgt:
                            e_tgt[t] = want
                            stack.append(("t", t))
                    if side == "t" and t == k:
                        want = e_tgt[t] - i
                        if s in d_src and d_src[s] != want:
                            return None
                        if s not in d_src:
                            d_src[s] = want
                            stack.append(("s", s))
        for t in range(len(T)):
            e_tgt.setdefault(t, 0)
        sv = [self.F(self.vertex_of[x], d_src[s]) for s, x in enumerate(S)]
        tv = [self.F(self.vertex_of[y], e_tgt[t]) for t, y in enumerate(T)]
        blocks = []
        for t, y in enumerate(T):
            row = []
            for s, x in enumerate(S):
                K = self.knitting(sv[s])
                acc = np.zeros(K.dim.get(tv[t], 0), dtype=np.int64)
                for k in np.nonzero(f.blocks[t][s])[0]:
                    _, _, p = self.hom_basis(x, y)[k]
                    q = tuple(self.F(u, d_src[s]) for u in p)
                    acc = (acc + int(f.blocks[t][s][k]) * K.push(self, np.ones(1, dtype=np.int64), q)) % self.field.p
                row.append(acc)
            blocks.append(row)
        return sv, tv, blocks

    def _db_dim(self, x: Vertex, y: Vertex) -> int:
        return self.knitting(x).dim.get(y, 0)

    def _db_post(self, W: Vertex, sv, tv, blocks) -> np.ndarray:
        """Matrix of Hom_D(W, lifted source) -> Hom_D(W, lifted target)."""
        KW = self.knitting(W)
        rows = []
        for t, y in enumerate(tv):
            cols = []
            for s, x in enumerate(sv):
                dws, dwt = KW.dim.get(x, 0), KW.dim.get(y, 0)
                M = np.zeros((dwt, dws), dtype=np.int64)
                paths = self.knitting(x).paths.get(y, [])
                for k in range(dws):
                    e = np.zeros(dws, dtype=np.int64)
                    e[k] = 1
                    for j, c in enumerate(blocks[t][s]):
                        if c:
                            M[:, k] = (M[:, k] + int(c) * KW.push(self, e, paths[j])) % self.field.p
                cols.append(M)
            rows.append(np.hstack(cols) if cols else np.zeros((KW.dim.get(y, 0), 0), dtype=np.int64))
        if not rows:
            return np.zeros((0, sum(KW.dim.get(x, 0) for x in sv)), dtype=np.int64)
        return np.vstack(rows)

    def lift_cone_object(self, f):
        """Cone via D^b: unitriangular solve of Hom dimensions into the cone."""
        from .base import TriObject

        lifted = self.lift(f)
        if lifted is None:
            raise TriCatError("morphism has no homogeneous lift; split it by degree")
        sv, tv, blocks = lifted
        F = self.field
        ns = [v[0] for v in sv + tv] + [self.psi(v)[0] for v in sv]
        h = self.n_max + 2
        lo, hi = min(ns) - 2 * h, max(ns) + 2 * h
        window = [(n, w) for n in range(lo, hi + 1) for w in self.order]
        din = []
        for W in window:
            Wm = self.psi(W, -1)
            a = self._db_post(W, sv, tv, blocks)
            b = self._db_post(Wm, sv, tv, blocks)
            ra = el.rank(F, a) if a.size else 0
            rb = el.rank(F, b) if b.size else 0
            din.append(sum(self._db_dim(W, y) for y in tv) - ra + sum(self._db_dim(Wm, x) for x in sv) - rb)
        m = [0] * len(window)
        for k in range(len(window) - 1, -1, -1):
            r = din[k] - sum(self._db_dim(window[k], window[j]) * m[j] for j in range(k + 1, len(window)) if m[j])
            if r < 0:
                raise TriCatError("negative multiplicity in lifted cone")
            m[k] = r
        if m[0] or m[-1]:
            raise TriCatError("lifted cone window too small")
        return TriObject(tuple(self.id_of(window[k]) for k in range(len(window)) for _ in range(m[k])))
