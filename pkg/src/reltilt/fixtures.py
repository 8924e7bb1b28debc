"""Named algebras, triangulated backends and golden tables used by tests and the CLI."""

from __future__ import annotations

import itertools
import json
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

from .exactlin import Field
from .quiverrep.algebra import Algebra, Quiver, build_algebra
from .relclust import CTContext, make_context
from .tricat.orbit import OrbitBackend
from .tricat.stable import StableBackend

FIXTURES = ("example-2.15", "example-5.1", "example-5.2", "cc-a2", "cc-a3")
GOLDEN_OF = {"ST": "example-5.1", "RC2": "example-5.2"}  # backend -> golden table with rows


def golden(name: str) -> dict:
    with resources.files("reltilt.data").joinpath(f"{name}.json").open(encoding="utf-8") as f:
        return json.load(f)


# algebras

def path_algebra_A(n: int, field: Optional[Field] = None) -> Algebra:
    vs = [str(i) for i in range(1, n + 1)]
    names = "abcdefghij"
    arrows = [(names[i] if n > 2 else "alpha", vs[i], vs[i + 1]) for i in range(n - 1)]
    return build_algebra(Quiver.from_lists(vs, arrows), [], field, name=f"A{n}")


def self_injective(field: Optional[Field] = None) -> Algebra:
    q = Quiver.from_lists(["1", "2"], [("alpha", "1", "2"), ("beta", "2", "1")])
    return build_algebra(q, ["alpha*beta*alpha*beta", "beta*alpha*beta*alpha"], field, name="SELF")


def lam_prime(field: Optional[Field] = None) -> Algebra:
    q = Quiver.from_lists(["a", "b"], [("gamma", "a", "b"), ("delta", "b", "a")])
    return build_algebra(q, ["gamma*delta", "delta*gamma"], field, name="LAM'")


def nakayama_cycle(n: int = 7, field: Optional[Field] = None) -> Algebra:
    vs = [str(i) for i in range(1, n + 1)]
    arrows = [(f"x{i}", vs[i], vs[(i + 1) % n]) for i in range(n)]
    rels = [f"x{i}*x{(i + 1) % n}" for i in range(n)]
    return build_algebra(Quiver.from_lists(vs, arrows), rels, field, name=f"NAK{n}")


ALGEBRAS = {
    "A2": lambda f=None: path_algebra_A(2, f),
    "A3": lambda f=None: path_algebra_A(3, f),
    "SELF": self_injective,
    "LAM'": lam_prime,
    "NAK7": lambda f=None: nakayama_cycle(7, f),
}


# backends: (builder, cluster-tilting object)

BACKENDS = {
    "ST": (lambda f=None: StableBackend(self_injective(f)), ["2", "2/1/2"]),
    "CC2": (lambda f=None: OrbitBackend(path_algebra_A(2, f), 1, 1), ["1/2", "2"]),
    "CC3": (lambda f=None: OrbitBackend(path_algebra_A(3, f), 1, 1), ["1/2/3", "2/3", "3"]),
    "RC2": (lambda f=None: OrbitBackend(path_algebra_A(2, f), 2, 2), ["1", "2[1]", "1/2[2]", "1[2]"]),
    "3CC3": (
        lambda f=None: OrbitBackend(path_algebra_A(3, f), 1, 3),
        ["2", "3[1]", "1/2/3[1]", "1[1]", "2[2]", "3[3]", "1/2/3[3]"],
    ),
}


@lru_cache(maxsize=None)
def backend(name: str, p: int = 101):
    return BACKENDS[name][0](Field(p))


@lru_cache(maxsize=None)
def context(name: str, p: int = 101) -> CTContext:
    """Context for a backend fixture, with Lambda's vertices named to match the golden data."""
    B = backend(name, p)
    T = BACKENDS[name][1]
    gold = {**GOLDEN_OF, "3CC3": "example-2.15"}.get(name)
    if gold is None:
        return make_context(B, T)
    ctx = make_context(B, T)
    names = match_vertex_names(ctx, golden(gold))
    return make_context(B, T, names=names)


def rename_module(label: str, sigma: dict) -> str:
    if label == "0":
        return label
    return "/".join(",".join(sigma[v] for v in layer.split(",")) for layer in label.split("/"))


def _golden_rows(ctx: CTContext, g: dict) -> list:
    """(object, expected module labels) pairs; 'Λ' expands to the regular module."""
    out = []
    if "rows" in g:
        for r in g["rows"]:
            out.append((r["tri_object"], r["stau_module"]))
    if "W" in g:
        out.append((g["W"], g["M"]))
    return out


def match_vertex_names(ctx: CTContext, g: dict) -> list:
    """Names for the summands of T (in T order) such that Lambda's quiver is the printed
    one and every printed row is reproduced; raises unless exactly one naming works."""
    target_v = list(g["lambda_quiver"]["vertices"])
    target_arrows = sorted(tuple(a) for a in g["lambda_quiver"]["arrows"])
    rows = _golden_rows(ctx, g)
    computed = []
    for X, _ in rows:
        p = ctx.tilde(X)
        computed.append([ctx.tt.cat.name(i) for i in p.M])
    proj_names = {v: ctx.tt.cat.name(ctx.tt.cat.projective[v]) for v in ctx.Lambda.vertices}
    hits = []
    for perm in itertools.permutations(target_v):
        sigma = dict(zip(ctx.names, perm))
        if sorted((sigma[s], sigma[t]) for _, s, t in ctx.arrows) != target_arrows:
            continue
        regular = sorted(rename_module(proj_names[v], sigma) for v in ctx.Lambda.vertices)
        ok = True
        for got, (_, want) in zip(computed, rows):
            want = regular if want == ["Λ"] else sorted(want)
            if sorted(rename_module(m, sigma) for m in got) != want:
                ok = False
                break
        if ok:
            hits.append([sigma[v] for v in ctx.names])
    if len(hits) != 1:
        raise ValueError(f"expected one vertex naming matching the golden data, found {len(hits)}")
    return hits[0]


def regular_labels(ctx: CTContext) -> list:
    return sorted(ctx.tt.cat.name(ctx.tt.cat.projective[v]) for v in ctx.Lambda.vertices)


def expected_modules(ctx: CTContext, labels: Sequence[str]) -> list:
    return regular_labels(ctx) if list(labels) == ["Λ"] else sorted(labels)


def point_labels(ctx: CTContext, objects: Sequence, g: dict) -> list:
    """Golden point names for enumerated objects, by summand multiset."""
    names = {tuple(sorted(ctx.B.index(l) for l in r["tri_object"])): r["point"] for r in g["rows"]}
    return [names.get(tuple(sorted(X.summands)), str(i)) for i, X in enumerate(objects)]
