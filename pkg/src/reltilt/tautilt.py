"""Support tau-tilting pairs: rigidity, completion, mutation and the Fac order.

Pairs are kept basic and refer to a :class:`~reltilt.quiverrep.Catalogue`:
the module part is a set of indecomposable ids, the projective part a set of
vertices (P_v for each listed v).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import exactlin as el
from .quiverrep import Catalogue, Module, build_algebra, decompose, direct_sum, indecomposables, tau
from .quiverrep.algebra import Algebra, Arrow, Quiver
from .quiverrep.approx import is_left_approximation, is_minimal, minimal_left_approximation
from .quiverrep.module import cokernel, trace_spaces


class TauTiltError(ValueError):
    pass


@dataclass(frozen=True)
class TauPair:
    M: frozenset
    P: frozenset = frozenset()

    @classmethod
    def of(cls, M: Iterable = (), P: Iterable = ()) -> "TauPair":
        return cls(frozenset(M), frozenset(str(v) for v in P))

    def size(self) -> int:
        return len(self.M) + len(self.P)

    def key(self) -> tuple:
        return (tuple(sorted(self.M)), tuple(sorted(self.P)))


class TauTilting:
    """tau-tilting computations over one algebra, with cached Fac/trace data."""

    def __init__(self, algebra: Algebra, cap: int = 10000):
        self.algebra = algebra
        self.cat: Catalogue = indecomposables(algebra, cap)
        self._trace: dict = {}
        self._fac: dict = {}

    # helpers
    @property
    def n(self) -> int:
        return self.algebra.n_vertices

    def label(self, pair: TauPair) -> str:
        parts = [self.cat.name(i) for i in sorted(pair.M, key=self._order)]
        parts += [f"P({v})" for v in sorted(pair.P)]
        return " + ".join(parts) if parts else "0"

    def module_names(self, pair: TauPair) -> list:
        return sorted(self.cat.name(i) for i in pair.M)

    def _order(self, i: int):
        return (-self.cat.modules[i].dim, self.cat.name(i))

    def module_of(self, ids: Iterable) -> Module:
        ids = sorted(ids)
        return direct_sum([self.cat.modules[i] for i in ids], self.algebra)[0]

    def ids_of(self, M: Module) -> list:
        """Catalogue ids of the indecomposable summands of M (with repetition)."""
        out = []
        for X, m in decompose(M):
            i = self.cat.find(X)
            if i is None:
                raise TauTiltError("summand not found in the catalogue")
            out.extend([i] * m)
        return out

    def pair_from_modules(self, M: Module, P: Optional[Module] = None) -> TauPair:
        verts = []
        if P is not None and P.dim:
            inv = {i: v for v, i in self.cat.projective.items()}
            for i in self.ids_of(P):
                if i not in inv:
                    raise TauTiltError("P is not projective")
                verts.append(inv[i])
        return TauPair.of(set(self.ids_of(M)) if M.dim else (), verts)

    def top(self) -> TauPair:
        return TauPair.of(self.cat.projective.values())

    def bottom(self) -> TauPair:
        return TauPair.of((), self.algebra.vertices)

    def sincere(self, ids: Iterable) -> bool:
        tot = np.zeros(self.n, dtype=int)
        for i in ids:
            tot += np.array(self.cat.dimvec(i))
        return bool((tot > 0).all())

    # rigidity
    def compatible(self, i: int, j: int) -> bool:
        return self.cat.hom_to_tau(i, j) == 0 and self.cat.hom_to_tau(j, i) == 0

    def is_tau_rigid_pair(self, pair: TauPair) -> bool:
        for v in pair.P:
            if v not in self.algebra.vertices:
                raise TauTiltError(f"P({v}) is not an indecomposable projective")
        for i in pair.M:
            for j in pair.M:
                if self.cat.hom_to_tau(i, j):
                    return False
            vi = [self.algebra.vertex_index(v) for v in pair.P]
            if any(self.cat.dimvec(i)[k] for k in vi):
                return False
        return True

    def is_stau_tilting_pair(self, pair: TauPair, check_quotient: bool = False) -> bool:
        ok = self.is_tau_rigid_pair(pair) and pair.size() == self.n
        if ok and check_quotient and pair.P:
            ok = self.tau_tilting_over_quotient(pair)
        return ok

    def tau_tilting_over_quotient(self, pair: TauPair) -> bool:
        """M is tau-tilting over Lambda / <e> where P = Lambda e (tau of the quotient algebra)."""
        B = quotient_by_vertices(self.algebra, pair.P)
        if B is None:
            return not pair.M
        mods = [restrict_module(self.cat.modules[i], B) for i in pair.M]
        if len(mods) != B.n_vertices:
            return False
        from .quiverrep import hom_dim

        S = direct_sum(mods, B)[0]
        return hom_dim(S, tau(S)) == 0

    # Fac and torsion classes
    def _trace_ij(self, i: int, j: int) -> list:
        key = (i, j)
        if key not in self._trace:
            self._trace[key] = trace_spaces(self.cat.modules[i], self.cat.modules[j])
        return self._trace[key]

    def in_fac(self, ids: Iterable, j: int) -> bool:
        ids = frozenset(ids)
        key = (ids, j)
        if key not in self._fac:
            F = self.algebra.field
            X = self.cat.modules[j]
            ok = True
            for v in range(self.n):
                cols = [self._trace_ij(i, j)[v] for i in ids]
                cols = [c for c in cols if c.shape[1]]
                r = el.rank(F, np.hstack(cols)) if cols else 0
                if r != X.dims[v]:
                    ok = False
                    break
            self._fac[key] = ok
        return self._fac[key]

    def fac_class(self, ids: Iterable) -> frozenset:
        ids = frozenset(ids)
        return frozenset(j for j in range(len(self.cat)) if self.in_fac(ids, j))

    def perp_tau(self, ids: Iterable) -> frozenset:
        """Indecomposables X with Hom(X, tau U) = 0."""
        ids = list(ids)
        return frozenset(j for j in range(len(self.cat)) if all(self.cat.hom_to_tau(j, i) == 0 for i in ids))

    def ext_projectives(self, cls: frozenset) -> frozenset:
        return frozenset(x for x in cls if all(self.cat.ext(x, y) == 0 for y in cls))

    def ext_projectives_of_fac(self, ids: Iterable) -> frozenset:
        return self.ext_projectives(self.fac_class(ids))

    def pair_leq(self, A: TauPair, B: TauPair) -> bool:
        """B <= A, i.e. Fac(A.M) contains Fac(B.M)."""
        return all(self.in_fac(A.M, j) for j in B.M)

    # completion and mutation
    def bongartz_completion(self, U: Iterable) -> TauPair:
        U = frozenset(U)
        if not self.is_tau_rigid_pair(TauPair.of(U)):
            raise TauTiltError("U is not tau-rigid")
        return TauPair.of(self.ext_projectives(self.perp_tau(U)))

    def completions(self, pair: TauPair) -> list:
        out = []
        for j in range(len(self.cat)):
            if j not in pair.M:
                cand = TauPair(pair.M | {j}, pair.P)
                if self.is_stau_tilting_pair(cand):
                    out.append(cand)
        for v in self.algebra.vertices:
            if v not in pair.P:
                cand = TauPair(pair.M, pair.P | {v})
                if self.is_stau_tilting_pair(cand):
                    out.append(cand)
        return out

    def remove(self, pair: TauPair, at) -> TauPair:
        kind, x = _parse_at(at)
        if kind == "M":
            if x not in pair.M:
                raise TauTiltError(f"{self.cat.name(x)} is not a summand of the module part")
            return TauPair(pair.M - {x}, pair.P)
        if x not in pair.P:
            raise TauTiltError(f"P({x}) is not a summand of the projective part")
        return TauPair(pair.M, pair.P - {x})

    def mutate_pair(self, pair: TauPair, at) -> TauPair:
        if not self.is_stau_tilting_pair(pair):
            raise TauTiltError("pair is not support tau-tilting")
        almost = self.remove(pair, at)
        comps = [c for c in self.completions(almost) if c != pair]
        if len(comps) != 1:
            raise TauTiltError(f"expected exactly one other completion, found {len(comps)}")
        return comps[0]

    def mutation_is_down(self, pair: TauPair, at) -> bool:
        """True when mutating at ``at`` gives a smaller pair (X not in Fac U)."""
        kind, x = _parse_at(at)
        if kind == "P":
            return False
        return not self.in_fac(pair.M - {x}, x)

    def exchange_sequence(self, pair: TauPair, at) -> "ExchangeSequence":
        kind, x = _parse_at(at)
        if kind != "M" or x not in pair.M:
            raise TauTiltError("exchange sequence needs an indecomposable summand of the module part")
        if pair.P or len(pair.M) != self.n or not self.is_tau_rigid_pair(pair):
            raise TauTiltError("precondition failed: pair is not tau-tilting")
        U = pair.M - {x}
        if self.bongartz_completion(U) != pair:
            raise TauTiltError("precondition failed: pair is not the Bongartz completion of U")
        Uids = sorted(U)
        Us = [self.cat.modules[i] for i in Uids]
        X = self.cat.modules[x]
        app = minimal_left_approximation(X, Us)
        if not is_left_approximation(app.map, Us) or not is_minimal(app, Us, "left"):
            raise TauTiltError("approximation check failed")
        Y, proj = cokernel(app.map)
        sincere = self.sincere(U)
        if Y.dim == 0:
            ys: list = []
        else:
            ys = self.ids_of(Y)
        distinct = set(ys)
        if len(distinct) > 1:
            raise TauTiltError("cokernel is not a power of one indecomposable")
        if not ys:
            result = [c for c in self.completions(TauPair(U, frozenset())) if c != pair]
            if len(result) != 1:
                raise TauTiltError("could not complete U")
            res = result[0]
        else:
            res = TauPair(U | distinct, frozenset())
        return ExchangeSequence(
            x=x,
            U=tuple(Uids),
            approximation=app.map,
            middle=tuple(Uids[j] for j in app.summands),
            cokernel=Y,
            cokernel_ids=tuple(ys),
            multiplicity=len(ys),
            sincere=sincere,
            result=res,
        )

    # enumeration
    def enumerate(self, check_bruteforce: bool = True) -> "STauPoset":
        start = self.top()
        index = {start: 0}
        nodes = [start]
        edges = []
        q = deque([start])
        while q:
            cur = q.popleft()
            for at in self.summands(cur):
                nxt = self.mutate_pair(cur, at)
                if nxt not in index:
                    index[nxt] = len(nodes)
                    nodes.append(nxt)
                    q.append(nxt)
                a, b = index[cur], index[nxt]
                if self.mutation_is_down(cur, at):
                    lab = _at_label(self, at)
                    edges.append((a, b, lab))
        if check_bruteforce:
            brute = set(self.bruteforce())
            if brute != set(nodes):
                raise TauTiltError("mutation search and brute-force enumeration disagree")
        n = len(nodes)
        order = np.zeros((n, n), dtype=int)
        for i in range(n):
            for j in range(n):
                order[i, j] = int(self.pair_leq(nodes[i], nodes[j]))
        return STauPoset(self, nodes, sorted(set(edges)), order)

    def summands(self, pair: TauPair) -> list:
        return [("M", i) for i in sorted(pair.M)] + [("P", v) for v in sorted(pair.P)]

    def bruteforce(self) -> list:
        """All support tau-tilting pairs, as maximal compatible families."""
        items = [("M", i) for i in range(len(self.cat))] + [("P", v) for v in self.algebra.vertices]
        ok_self = [it for it in items if it[0] == "P" or self.cat.hom_to_tau(it[1], it[1]) == 0]

        def comp(a, b):
            if a[0] == "M" and b[0] == "M":
                return self.compatible(a[1], b[1])
            if a[0] == "P" and b[0] == "P":
                return a[1] != b[1]
            m, v = (a[1], b[1]) if a[0] == "M" else (b[1], a[1])
            return self.cat.dimvec(m)[self.algebra.vertex_index(v)] == 0

        out = []

        def rec(start, chosen):
            if len(chosen) == self.n:
                out.append(TauPair.of([c[1] for c in chosen if c[0] == "M"], [c[1] for c in chosen if c[0] == "P"]))
                return
            for k in range(start, len(ok_self)):
                it = ok_self[k]
                if all(comp(it, c) for c in chosen):
                    rec(k + 1, chosen + [it])

        rec(0, [])
        return out


def _parse_at(at):
    if isinstance(at, tuple) and len(at) == 2 and at[0] in ("M", "P"):
        return at[0], (int(at[1]) if at[0] == "M" else str(at[1]))
    if isinstance(at, (int, np.integer)):
        return "M", int(at)
    raise TauTiltError(f"cannot interpret summand {at!r}")


def _at_label(tt: TauTilting, at) -> str:
    kind, x = _parse_at(at)
    return tt.cat.name(x) if kind == "M" else f"P({x})"


@dataclass
class ExchangeSequence:
    x: int
    U: tuple
    approximation: object
    middle: tuple
    cokernel: Module
    cokernel_ids: tuple
    multiplicity: int
    sincere: bool
    result: TauPair

    @property
    def indecomposable_cokernel(self) -> bool:
        return self.multiplicity == 1


@dataclass
class STauPoset:
    tt: TauTilting
    nodes: list
    edges: list  # (upper, lower, exchanged summand label)
    order: np.ndarray  # order[i, j] = 1 iff nodes[j] <= nodes[i]
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.nodes)

    def index(self, pair: TauPair) -> int:
        return self.nodes.index(pair)

    def covers(self) -> set:
        n = len(self.nodes)
        out = set()
        for i in range(n):
            for j in range(n):
                if i != j and self.order[i, j] and not any(
                    k not in (i, j) and self.order[i, k] and self.order[k, j] for k in range(n)
                ):
                    out.add((i, j))
        return out

    def labels(self) -> list:
        return [self.tt.label(p) for p in self.nodes]

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": i, "modules": self.tt.module_names(p), "projectives": sorted(p.P), "label": self.tt.label(p)}
                for i, p in enumerate(self.nodes)
            ],
            "edges": [{"upper": a, "lower": b, "exchanged": lab} for a, b, lab in self.edges],
            "order": self.order.tolist(),
        }

    def to_dot(self) -> str:
        lines = ["digraph Hasse {"]
        for i, lab in enumerate(self.labels()):
            lines.append(f'  n{i} [label="{lab}"];')
        for a, b, lab in self.edges:
            lines.append(f'  n{a} -> n{b} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def quotient_by_vertices(A: Algebra, verts: Iterable) -> Optional[Algebra]:
    """Lambda / Lambda e Lambda for e the sum of the idempotents at ``verts``."""
    drop = {str(v) for v in verts}
    keep = [v for v in A.vertices if v not in drop]
    if not keep:
        return None
    arrows = [a for a in A.quiver.arrows if a.source in keep and a.target in keep]
    q = Quiver(tuple(keep), tuple(Arrow(a.name, a.source, a.target) for a in arrows))
    names = {a.name for a in arrows}
    rels = []
    for r in A.relations:
        d = {k: c for k, c in r.items() if all(x in names for x in k[1])}
        if d:
            rels.append(d)
    return build_algebra(q, rels, A.field)


def restrict_module(M: Module, B: Algebra) -> Module:
    dims = [M.dim_at(v) for v in B.vertices]
    return Module(B, dims, {a.name: M.mats[a.name] for a in B.quiver.arrows}, check=False)
