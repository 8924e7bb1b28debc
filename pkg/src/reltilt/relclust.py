"""Relative cluster tilting: a cluster-tilting object T, the functor Hom(T, -),
T[1]-rigid and T[1]-cluster tilting objects, their order and mutation.

Lambda = End(T)^op has one vertex per summand T_i; a map u: T_i -> T_j that is
irreducible in add T gives an arrow j -> i.  A Lambda-module bar(X) has
bar(X)_i = Hom(T_i, X), and an arrow acts by precomposition with its map.
"""

from __future__ import annotations

import json
import math
import string
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import exactlin as el
from .quiverrep.algebra import Quiver, build_algebra
from .quiverrep.approx import is_left_approximation, minimal_left_approximation
from .quiverrep.homological import projective_cover
from .quiverrep.module import ModMorphism, Module, cokernel, kernel
from .tautilt import TauPair, TauTilting
from .tricat.base import (
    Backend,
    TriMorphism,
    TriObject,
    Triangle,
    _compose_vec,
    cone,
    hom_cache,
    hom_space_dim,
    ideal_basis,
    ideal_dim,
    in_ideal,
    minimal_approx,
    obj,
    postcompose_matrix,
    precompose_matrix,
    rigidity,
    shift,
)


class RelClustError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass
class IdealSlice:
    source: TriObject
    target: TriObject
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class Flags:
    t1_rigid: bool
    t1_cluster_tilting: bool
    almost_t1_cluster_tilting: bool


class CTContext:
    """A backend with a basic cluster-tilting object T and Lambda = End(T)^op."""

    def __init__(self, B: Backend, T: TriObject, names: Optional[Sequence[str]] = None, check: bool = True):
        T = obj(B, T)
        if len(set(T.summands)) != len(T.summands):
            raise RelClustError("T must be basic")
        if check and not rigidity(B, T, "cluster_tilting"):
            raise RelClustError("T is not cluster-tilting")
        self.B = B
        self.T = T
        self.T1 = shift(B, T)
        self.names = list(names) if names else list(string.ascii_lowercase[: len(T)])
        if len(self.names) != len(T):
            raise RelClustError("need one vertex name per summand of T")
        self.vertex = {t: v for t, v in zip(T.summands, self.names)}
        self._build_algebra()
        self.tt = TauTilting(self.Lambda)
        self._bar_id: dict = {}
        self._lift: dict = {}
        self._build_tables()

    # Lambda

    def _build_algebra(self):
        B, F = self.B, self.B.field
        hc = hom_cache(B)
        ts = self.T.summands
        arrows, self.arrow_map = [], {}
        for i, ti in enumerate(ts):
            for j, tj in enumerate(ts):
                d = B.hom_dim(ti, tj)
                if not d:
                    continue
                rad = hc.rad(ti, tj)
                vecs = []
                for tk in ts:
                    R1, R2 = hc.rad(ti, tk), hc.rad(tk, tj)
                    for a in range(R1.shape[1]):
                        for b in range(R2.shape[1]):
                            vecs.append(_compose_vec(B, ti, tk, tj, R2[:, b], R1[:, a]))
                R2span = el.column_space(F, np.stack(vecs, axis=1)) if vecs else np.zeros((d, 0), dtype=np.int64)
                # complement of rad^2 inside rad
                M = np.hstack([R2span, rad]) if rad.size else R2span
                _, piv = el.rref(F, M) if M.size else (None, [])
                k0 = R2span.shape[1]
                chosen = [c - k0 for c in piv if c >= k0]
                for n, c in enumerate(chosen):
                    name = f"{self.names[j]}{self.names[i]}" + (str(n) if len(chosen) > 1 else "")
                    arrows.append((name, self.names[j], self.names[i]))
                    self.arrow_map[name] = (tj, ti, rad[:, c].copy())
        self.arrows = arrows
        q = Quiver.from_lists(self.names, arrows)
        self.quiver = q
        total = hom_space_dim(B, self.T, self.T)
        rels = []
        by_src = {v: [a for a in arrows if a[1] == v] for v in self.names}
        t_of = {v: t for t, v in self.vertex.items()}
        # (start, path) -> (end vertex, morphism T_end -> T_start)
        layer = {}
        for name, s, t in arrows:
            layer[(s, (name,))] = (t, self.arrow_map[name][2])
        collected: dict = {}
        L = 1
        while layer:
            L += 1
            if L > total + 2:
                raise RelClustError("path lengths in End(T) do not stabilize")
            nxt = {}
            for (s, p), (e, m) in layer.items():
                for name, _, t in by_src[e]:
                    u = self.arrow_map[name][2]
                    v = _compose_vec(B, t_of[t], t_of[e], t_of[s], m, u)
                    nxt[(s, p + (name,))] = (t, v)
            for key, (e, v) in nxt.items():
                collected.setdefault((key[0], e), []).append((key, v))
            layer = {k: val for k, val in nxt.items() if val[1].any()}
        for (s, e), items in sorted(collected.items()):
            M = np.stack([v for _, v in items], axis=1)
            K = el.kernel(F, M)
            for c in range(K.shape[1]):
                rels.append({items[k][0]: int(K[k, c]) for k in range(len(items)) if K[k, c]})
        self.Lambda = build_algebra(q, rels, F, name="End(T)^op")
        if self.Lambda.dim != total:
            raise InvariantViolation(f"dim Lambda = {self.Lambda.dim} but dim End(T) = {total}")

    # the functor Hom(T, -)

    def bar(self, x):
        B = self.B
        if isinstance(x, TriMorphism):
            S, T = self.bar(x.source), self.bar(x.target)
            maps = [postcompose_matrix(B, x, TriObject((t,))) for t in self.T.summands]
            return ModMorphism(S, T, maps)
        X = obj(B, x)
        dims = [hom_space_dim(B, TriObject((t,)), X) for t in self.T.summands]
        mats = {}
        for name, (tj, ti, u) in self.arrow_map.items():
            f = TriMorphism(B, TriObject((ti,)), TriObject((tj,)), [[u]])
            mats[name] = precompose_matrix(B, f, X)
        return Module(self.Lambda, dims, mats)

    def in_T1(self, x: int) -> bool:
        return x in self.T1.summands

    def split(self, X: TriObject) -> tuple:
        """(X', X'') with X'' the summands in add T[1]."""
        a = tuple(x for x in X.summands if not self.in_T1(x))
        b = tuple(x for x in X.summands if self.in_T1(x))
        return TriObject(a), TriObject(b)

    def bar_id(self, x: int) -> int:
        """Catalogue id over Lambda of bar(x) for an indecomposable x not in add T[1]."""
        if x not in self._bar_id:
            if self.in_T1(x):
                raise RelClustError("bar kills add T[1]")
            c = self.tt.cat.find(self.bar(TriObject((x,))))
            if c is None:
                raise InvariantViolation(f"bar({self.B.name(x)}) is not an indecomposable Lambda-module")
            self._bar_id[x] = c
        return self._bar_id[x]

    def _build_tables(self):
        """Lift table: Lambda catalogue id -> indecomposable of the backend."""
        for x in range(self.B.n):
            if not self.in_T1(x):
                c = self.bar_id(x)
                if c in self._lift:
                    raise InvariantViolation("bar is not injective on indecomposables outside add T[1]")
                self._lift[c] = x
        if len(self._lift) != len(self.tt.cat):
            raise InvariantViolation("bar does not reach every indecomposable Lambda-module")
        self.T1_of_vertex = {self.vertex[t]: self.B.shift_label(t) for t in self.T.summands}
        self.vertex_of_T1 = {x: v for v, x in self.T1_of_vertex.items()}

    def tilde(self, X) -> TauPair:
        X = obj(self.B, X)
        Xp, Xpp = self.split(X)
        return TauPair.of([self.bar_id(x) for x in Xp.summands], [self.vertex_of_T1[x] for x in Xpp.summands])

    def tilde_inv(self, pair: TauPair) -> TriObject:
        xs = [self._lift[c] for c in sorted(pair.M)] + [self.T1_of_vertex[v] for v in sorted(pair.P)]
        return TriObject(tuple(xs))

    # ideals

    def ghost_ideal(self, X, Y, through: str = "T_shift1") -> IdealSlice:
        X, Y = obj(self.B, X), obj(self.B, Y)
        M = self.T1 if through in ("T_shift1", "T[1]") else self.T
        return IdealSlice(X, Y, ideal_basis(self.B, X, Y, M.summands))

    def ghost_dim(self, X, Y, through: str = "T_shift1") -> int:
        M = self.T1 if through in ("T_shift1", "T[1]") else self.T
        return ideal_dim(self.B, obj(self.B, X), obj(self.B, Y), M.summands)

    def t1_rigid_direct(self, X) -> bool:
        X = obj(self.B, X)
        return self.ghost_dim(X, shift(self.B, X)) == 0

    def classify_T1(self, X) -> Flags:
        X = obj(self.B, X).basic()
        direct = self.t1_rigid_direct(X)
        via_pair = self.tt.is_tau_rigid_pair(self.tilde(X))
        if direct != via_pair:
            names = [self.B.name(x) for x in X.summands]
            raise InvariantViolation(f"T[1]-rigidity of {names}: ghost ideal says {direct}, tau-rigid pair says {via_pair}")
        n = len(self.T)
        return Flags(direct, direct and len(X) == n, direct and len(X) == n - 1)

    def factorization_ideal(self, X) -> tuple:
        X = obj(self.B, X)
        d = ideal_dim(self.B, self.T1, self.T1, X.summands)
        return d, d == 0

    # order

    def star_contains(self, M, X, cross_check: bool = False) -> bool:
        """X lies in M * [T[1]], decided by bar(X') in Fac bar(M')."""
        M, X = obj(self.B, M), obj(self.B, X)
        Mp, _ = self.split(M)
        Xp, _ = self.split(X)
        ids = {self.bar_id(m) for m in Mp.summands}
        verdict = all(self.tt.in_fac(ids, self.bar_id(x)) for x in Xp.summands)
        if cross_check:
            direct = self.star_contains_direct(M, X)
            if direct != verdict:
                raise InvariantViolation("star membership: Fac criterion and triangle search disagree")
        return verdict

    def star_contains_direct(self, M, X) -> bool:
        """Triangle M_X -> X -> C -> M_X[1] from the minimal right add(M)-approximation;
        X is in M * [T[1]] iff its connecting map X -> C factors through add T[1]."""
        M, X = obj(self.B, M), obj(self.B, X)
        for x in X.summands:
            Xi = TriObject((x,))
            app = minimal_approx(self.B, Xi, M, "right")
            tri = cone(self.B, app.map)
            if not in_ideal(self.B, tri.g, self.T1.summands):
                return False
        return True

    def rel_leq(self, M, N) -> bool:
        """N <= M, i.e. M * [T[1]] contains N * [T[1]]."""
        N = obj(self.B, N)
        return self.star_contains(M, N)

    def t1_projectives(self, M) -> TriObject:
        """Indecomposables X of M * [T[1]] with [T[1]](X, Y[1]) = 0 for all Y in M * [T[1]]."""
        M = obj(self.B, M)
        cls = [x for x in range(self.B.n) if self.star_contains(M, TriObject((x,)))]
        out = []
        for x in cls:
            X = TriObject((x,))
            if all(self.ghost_dim(X, TriObject((self.B.shift_label(y),))) == 0 for y in cls):
                out.append(x)
        return TriObject(tuple(out))

    # mutation

    def complements(self, U) -> list:
        U = obj(self.B, U)
        return [
            y
            for y in range(self.B.n)
            if y not in U.summands and self.classify_T1(TriObject(U.summands + (y,))).t1_cluster_tilting
        ]

    def mutate_t1(self, M, at) -> "Mutation":
        B = self.B
        M = obj(B, M)
        x = B.index(at) if not isinstance(at, int) else at
        if x not in M.summands:
            raise RelClustError(f"{B.name(x)} is not a summand")
        if not self.classify_T1(M).t1_cluster_tilting:
            raise RelClustError("object is not T[1]-cluster tilting")
        U = TriObject(tuple(m for m in M.summands if m != x))
        X = TriObject((x,))
        others = [y for y in self.complements(U) if y != x]
        if len(others) != 1:
            raise InvariantViolation(f"expected exactly two complements, found {len(others) + 1}")
        y = others[0]
        if self.star_contains(U, X):
            app = minimal_approx(B, X, U, "right")
            tri = cone(B, app.map)  # U1 -> X -> Y[1] -> U1[1]
            got = shift(B, tri.Z, -1)
            direction = "right"
        else:
            app = minimal_approx(B, X, U, "left")
            tri = cone(B, app.map)  # X -> U2 -> Y -> X[1]
            got = tri.Z
            direction = "left"
        if got.multiset() != (y,):
            raise InvariantViolation(
                f"exchange triangle gives {[B.name(g) for g in got.summands]}, search gives {B.name(y)}"
            )
        N = TriObject(U.summands + (y,))
        return Mutation(M, x, N, y, tri, app.map, direction)

    def exchange_triangle_to_sequence(self, mut: "Mutation") -> "SequenceComparison":
        """bar of a (left) exchange triangle against the module-side exchange sequence."""
        if mut.direction != "left":
            raise RelClustError("needs a triangle X -> U2 -> Y -> X[1] from a left approximation")
        pair = self.tilde(mut.M)
        n = self.Lambda.n_vertices
        if pair.P or len(pair.M) != n:
            raise RelClustError("precondition failed: tilde(M) is not tau-tilting")
        xb = self.bar_id(mut.x)
        U_ids = pair.M - {xb}
        if self.tt.bongartz_completion(U_ids) != pair:
            raise RelClustError("precondition failed: tilde(M) is not the Bongartz completion of tilde(U)")
        seq = self.tt.exchange_sequence(pair, ("M", xb))
        fb = self.bar(mut.approximation)
        Us = [self.tt.cat.modules[i] for i in sorted(U_ids)]
        left_ok = is_left_approximation(fb, Us)
        mids = self.tt.ids_of(fb.target) if fb.target.dim else []
        minimal_ok = left_ok and self._left_minimal(fb, Us, mids)
        Yb, _ = cokernel(fb)
        ys = self.tt.ids_of(Yb) if Yb.dim else []
        gb = self.bar(mut.triangle.g)
        exact = _is_exact(self.Lambda.field, fb, gb) and _is_surjective(gb)
        matches = sorted(mids) == sorted(seq.middle) and sorted(ys) == sorted(seq.cokernel_ids)
        return SequenceComparison(seq, tuple(sorted(mids)), tuple(sorted(ys)), left_ok, minimal_ok, exact, matches)

    def _left_minimal(self, f: ModMorphism, Us: list, mids: list) -> bool:
        """A left approximation is minimal iff its target matches the minimal one summand for summand."""
        app = minimal_left_approximation(f.source, Us)
        ids = sorted(self.tt.ids_of(app.map.target)) if app.map.target.dim else []
        return ids == sorted(mids)

    # module-side invariants

    def pd(self, M: Module) -> float:
        """Projective dimension by syzygies, up to dim Lambda steps (inf if not reached)."""
        cur = M
        for k in range(self.Lambda.dim + 1):
            if cur.dim == 0:
                return 0 if k == 0 else k - 1
            cov = projective_cover(cur)
            if cov.module.dim == cur.dim:
                return k
            cur, _ = kernel(cov.map)
        return math.inf

    def is_tilting(self, pair: TauPair) -> bool:
        if pair.P or len(pair.M) != self.Lambda.n_vertices:
            return False
        return all(self.pd(self.tt.cat.modules[i]) <= 1 for i in pair.M)

    # enumeration

    def t1_compatible(self, x: int, y: int) -> bool:
        B = self.B
        X, Y = TriObject((x,)), TriObject((y,))
        return self.ghost_dim(X, shift(B, Y)) == 0 and self.ghost_dim(Y, shift(B, X)) == 0

    def t1_rigid_objects(self, max_size: Optional[int] = None) -> list:
        """All basic T[1]-rigid objects, as sorted tuples of ids (cliques of pairwise compatibility)."""
        n = self.B.n
        size = len(self.T) if max_size is None else max_size
        self_ok = [x for x in range(n) if self.ghost_dim(TriObject((x,)), TriObject((self.B.shift_label(x),))) == 0]
        comp = {x: {y for y in self_ok if y != x and self.t1_compatible(x, y)} for x in self_ok}
        out = [()]

        def rec(chosen, cands):
            for i, c in enumerate(cands):
                nxt = chosen + (c,)
                out.append(nxt)
                if len(nxt) < size:
                    rec(nxt, [d for d in cands[i + 1 :] if d in comp[c]])

        rec((), sorted(self_ok))
        return out

    def rel_poset(self, cross_check: bool = True) -> "RelPoset":
        sp = self.tt.enumerate(check_bruteforce=cross_check)
        objs = [self.tilde_inv(p) for p in sp.nodes]
        for X, p in zip(objs, sp.nodes):
            if not self.classify_T1(X).t1_cluster_tilting:
                raise InvariantViolation("pullback of a support tau-tilting pair is not T[1]-cluster tilting")
            if self.tilde(X) != p:
                raise InvariantViolation("tilde o tilde_inv is not the identity")
        if cross_check:
            direct = {c for c in self.t1_rigid_objects() if len(c) == len(self.T)}
            if direct != {X.multiset() for X in objs}:
                raise InvariantViolation("pullback and direct search give different T[1]-cluster tilting sets")
        n = len(objs)
        order = np.array([[int(self.rel_leq(objs[i], objs[j])) for j in range(n)] for i in range(n)])
        if not (order == sp.order).all():
            raise InvariantViolation("star order and Fac order disagree")
        ct = [rigidity(self.B, X, "cluster_tilting") for X in objs]
        return RelPoset(self, objs, sp, order, ct)

    def filtered_sets(self) -> dict:
        """The four object sets with their Lambda-side images, each checked to be a bijection."""
        rigid = [TriObject(c) for c in self.t1_rigid_objects()]
        n = len(self.T)
        tilt = [X for X in rigid if len(X) == n]
        tilt_T = [X for X in tilt if not self.split(X)[1].summands]
        tilt_T0 = [X for X in tilt_T if self.factorization_ideal(X)[1]]
        pairs = self._tau_rigid_pairs()
        lam = {
            "rigid": pairs,
            "tilt": [p for p in pairs if p.size() == n],
            "tilt_T": [p for p in pairs if p.size() == n and not p.P],
            "tilt_T0": [p for p in pairs if self.is_tilting(p)],
        }
        out = {}
        for key, objs in (("rigid", rigid), ("tilt", tilt), ("tilt_T", tilt_T), ("tilt_T0", tilt_T0)):
            images = [self.tilde(X) for X in objs]
            if len(set(images)) != len(images) or set(images) != set(lam[key]):
                raise InvariantViolation(f"set {key}: tilde is not a bijection onto its Lambda-side image")
            out[key] = list(zip(objs, images))
        return out

    def _tau_rigid_pairs(self) -> list:
        cat, tt = self.tt.cat, self.tt
        items = [("M", i) for i in range(len(cat)) if cat.hom_to_tau(i, i) == 0]
        items += [("P", v) for v in self.Lambda.vertices]

        def ok(a, b):
            if a[0] == "M" and b[0] == "M":
                return tt.compatible(a[1], b[1])
            if a[0] == "P" and b[0] == "P":
                return True
            i, v = (a[1], b[1]) if a[0] == "M" else (b[1], a[1])
            return cat.dimvec(i)[self.Lambda.vertex_index(v)] == 0

        out = [TauPair.of()]

        def rec(chosen, cands):
            for k, c in enumerate(cands):
                nxt = chosen + [c]
                out.append(TauPair.of([i for t, i in nxt if t == "M"], [v for t, v in nxt if t == "P"]))
                rec(nxt, [d for d in cands[k + 1 :] if ok(c, d)])

        rec([], items)
        return out

    # labels

    def object_labels(self, X) -> list:
        return sorted(self.B.name(x) for x in obj(self.B, X).summands)

    def module_labels(self, pair: TauPair) -> list:
        return sorted(self.tt.cat.name(i) for i in pair.M)


def _is_exact(F, f: ModMorphism, g: ModMorphism) -> bool:
    for a, b in zip(f.maps, g.maps):
        if a.size and b.size and F.mul(b, a).any():
            return False
        n = a.shape[0]
        ra = el.rank(F, a) if a.size else 0
        rb = el.rank(F, b) if b.size else 0
        if ra != n - rb:
            return False
    return True


def _is_surjective(g: ModMorphism) -> bool:
    F = g.source.algebra.field
    return all((el.rank(F, m) if m.size else 0) == m.shape[0] for m in g.maps)


@dataclass
class Mutation:
    M: TriObject
    x: int
    N: TriObject
    y: int
    triangle: Triangle
    approximation: TriMorphism
    direction: str  # "right": N > M, "left": N < M


@dataclass
class SequenceComparison:
    module_side: object
    middle: tuple
    cokernel: tuple
    left_approximation: bool
    minimal: bool
    exact: bool
    matches: bool

    @property
    def multiplicity(self) -> int:
        return len(self.cokernel)


@dataclass
class RelPoset:
    ctx: CTContext
    objects: list
    stau: object
    order: np.ndarray  # order[i, j] = 1 iff objects[j] <= objects[i]
    cluster_tilting: list
    point_labels: list = field(default_factory=list)

    def __len__(self):
        return len(self.objects)

    def edges(self) -> list:
        return [(a, b) for a, b, _ in self.stau.edges]

    def rows(self) -> list:
        ctx = self.ctx
        out = []
        for i, (X, p) in enumerate(zip(self.objects, self.stau.nodes)):
            out.append(
                {
                    "point_label": self.point_labels[i] if self.point_labels else str(i),
                    "tri_object": ctx.object_labels(X),
                    "stau_module": ctx.module_labels(p),
                    "stau_projective": sorted(p.P),
                    "cluster_tilting": bool(self.cluster_tilting[i]),
                }
            )
        return out

    def to_json(self) -> dict:
        return {
            "rows": self.rows(),
            "edges": [{"upper": a, "lower": b} for a, b in self.edges()],
            "order": self.order.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["digraph RelTilt {"]
        for i, X in enumerate(self.objects):
            lab = " + ".join(self.ctx.object_labels(X))
            shape = ",shape=doublecircle" if self.cluster_tilting[i] else ""
            lines.append(f'  n{i} [label="{lab}"{shape}];')
        for a, b in self.edges():
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def make_context(B: Backend, T, names: Optional[Sequence[str]] = None) -> CTContext:
    return CTContext(B, T, names)
