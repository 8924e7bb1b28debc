"""Minimal add(U)-approximations of modules."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import exactlin as el
from .homological import radical_endomorphisms
from .module import ModMorphism, Module, direct_sum, hom_basis, morphism_coords


@dataclass
class Approximation:
    map: ModMorphism  # X -> U' (left) or U' -> X (right)
    summands: tuple  # index into the U list, one per summand of U'


def _rad_maps(Us, k: int, j: int) -> list:
    if k == j:
        return radical_endomorphisms(Us[j])
    return hom_basis(Us[k], Us[j])


def minimal_left_approximation(X: Module, Us: list) -> Approximation:
    """Minimal left add(U)-approximation X -> U' for pairwise non-isomorphic indecomposables Us."""
    F = X.algebra.field
    H = [hom_basis(X, U) for U in Us]
    chosen = []
    for j in range(len(Us)):
        if not H[j]:
            continue
        vecs = []
        for k in range(len(Us)):
            for r in _rad_maps(Us, k, j):
                for h in H[k]:
                    vecs.append(morphism_coords(r.compose(h), H[j]))
        R = np.stack(vecs, axis=1) if vecs else np.zeros((len(H[j]), 0), dtype=np.int64)
        C = el.complement_basis(F, el.column_space(F, R), len(H[j]))
        for c in range(C.shape[1]):
            f = ModMorphism.zero(X, Us[j])
            for k in np.nonzero(C[:, c])[0]:
                f = f + H[j][k].scale(int(C[k, c]))
            chosen.append((j, f))
    S, incs, _ = direct_sum([Us[j] for j, _ in chosen], X.algebra)
    g = ModMorphism.zero(X, S)
    for inc, (_, f) in zip(incs, chosen):
        g = g + inc.compose(f)
    return Approximation(g, tuple(j for j, _ in chosen))


def minimal_right_approximation(X: Module, Us: list) -> Approximation:
    F = X.algebra.field
    H = [hom_basis(U, X) for U in Us]
    chosen = []
    for j in range(len(Us)):
        if not H[j]:
            continue
        vecs = []
        for k in range(len(Us)):
            for r in _rad_maps(Us, j, k):
                for h in H[k]:
                    vecs.append(morphism_coords(h.compose(r), H[j]))
        R = np.stack(vecs, axis=1) if vecs else np.zeros((len(H[j]), 0), dtype=np.int64)
        C = el.complement_basis(F, el.column_space(F, R), len(H[j]))
        for c in range(C.shape[1]):
            f = ModMorphism.zero(Us[j], X)
            for k in np.nonzero(C[:, c])[0]:
                f = f + H[j][k].scale(int(C[k, c]))
            chosen.append((j, f))
    S, _, projs = direct_sum([Us[j] for j, _ in chosen], X.algebra)
    g = ModMorphism.zero(S, X)
    for pr, (_, f) in zip(projs, chosen):
        g = g + f.compose(pr)
    return Approximation(g, tuple(j for j, _ in chosen))


def is_left_approximation(g: ModMorphism, Us: list) -> bool:
    """Every map X -> U_j factors through g: X -> U'."""
    F = g.source.algebra.field
    for U in Us:
        H = hom_basis(g.source, U)
        if not H:
            continue
        got = [morphism_coords(phi.compose(g), H) for phi in hom_basis(g.target, U)]
        if not got or el.rank(F, np.stack(got, axis=1)) < len(H):
            return False
    return True


def is_right_approximation(g: ModMorphism, Us: list) -> bool:
    F = g.source.algebra.field
    for U in Us:
        H = hom_basis(U, g.target)
        if not H:
            continue
        got = [morphism_coords(g.compose(phi), H) for phi in hom_basis(U, g.source)]
        if not got or el.rank(F, np.stack(got, axis=1)) < len(H):
            return False
    return True


def drop_summand(app: Approximation, Us: list, k: int, side: str) -> ModMorphism:
    """The approximation with its k-th summand removed."""
    g = app.map
    keep = [i for i in range(len(app.summands)) if i != k]
    A = g.source.algebra
    S, incs, projs = direct_sum([Us[app.summands[i]] for i in range(len(app.summands))], A)
    T, tincs, tprojs = direct_sum([Us[app.summands[i]] for i in keep], A)
    if side == "left":
        out = ModMorphism.zero(g.source, T)
        for ti, i in zip(tincs, keep):
            out = out + ti.compose(projs[i].compose(g))
        return out
    out = ModMorphism.zero(T, g.target)
    for tp, i in zip(tprojs, keep):
        out = out + g.compose(incs[i].compose(tp))
    return out


def is_minimal(app: Approximation, Us: list, side: str) -> bool:
    check = is_left_approximation if side == "left" else is_right_approximation
    for k in range(len(app.summands)):
        if check(drop_summand(app, Us, k, side), Us):
            return False
    return True
