"""Projective presentations, the AR translate, Ext^1, and Krull-Schmidt splitting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import exactlin as el
from .algebra import Algebra
from .module import (
    ModMorphism,
    Module,
    cokernel,
    direct_sum,
    dual,
    hom_basis,
    injective,
    kernel,
    morphism_coords,
    opposite,
    projective,
    projective_basis_index,
    radical_spaces,
    socle_spaces,
    submodule,
    zero_module,
)

_SEED = 20240901


def _cache(A: Algebra) -> dict:
    return A.__dict__.setdefault("_hcache", {})


def indec_projective(A: Algebra, v) -> Module:
    c = _cache(A)
    key = ("P", str(v))
    if key not in c:
        c[key] = projective(A, v)
    return c[key]


def indec_injective(A: Algebra, v) -> Module:
    c = _cache(A)
    key = ("I", str(v))
    if key not in c:
        c[key] = injective(A, v)
    return c[key]


def map_from_projective(A: Algebra, v, x: np.ndarray, M: Module) -> ModMorphism:
    """The map P_v -> M sending e_v to x in M_v."""
    P = indec_projective(A, v)
    idx = projective_basis_index(A, v)
    maps = [np.zeros((M.dims[i], P.dims[i]), dtype=np.int64) for i in range(A.n_vertices)]
    x = np.asarray(x, dtype=np.int64)
    for b, (u, k) in idx.items():
        img = A.field.mul(M.path_matrix(A.basis[b]), x.reshape(-1, 1))[:, 0]
        maps[A.vertex_index(u)][:, k] = img
    return ModMorphism(P, M, maps)


@dataclass
class ProjCover:
    module: Module  # P0
    summands: tuple  # vertices of the indecomposable summands, in order
    map: ModMorphism  # P0 -> M
    incs: tuple  # P_v -> P0


def projective_cover(M: Module) -> ProjCover:
    A = M.algebra
    F = A.field
    rad = radical_spaces(M)
    verts, maps = [], []
    for i, v in enumerate(A.vertices):
        C = el.complement_basis(F, rad[i], M.dims[i])
        for j in range(C.shape[1]):
            verts.append(v)
            maps.append(map_from_projective(A, v, C[:, j], M))
    P, incs, projs = direct_sum([indec_projective(A, v) for v in verts], A)
    f = ModMorphism.zero(P, M)
    for g, pr in zip(maps, projs):
        f = f + g.compose(pr)
    return ProjCover(P, tuple(verts), f, tuple(incs))


@dataclass
class Presentation:
    """Minimal projective presentation P1 -> P0 -> M -> 0 with Omega M = ker(P0 -> M)."""

    M: Module
    cover0: ProjCover
    omega: Module
    omega_inc: ModMorphism  # Omega -> P0
    cover1: ProjCover  # P1 -> Omega
    d: ModMorphism  # P1 -> P0


def presentation(M: Module) -> Presentation:
    c0 = projective_cover(M)
    K, inc = kernel(c0.map)
    c1 = projective_cover(K)
    return Presentation(M, c0, K, inc, c1, inc.compose(c1.map))


def _component_element(A: Algebra, d: ModMorphism, P1: ProjCover, P0: ProjCover, j: int, i: int) -> np.ndarray:
    """Algebra element p with the (i, j) component of d equal to right multiplication by p."""
    v, w = P1.summands[j], P0.summands[i]
    e = np.zeros(A.dim, dtype=np.int64)
    e[A.idempotent(v)] = 1
    # image of e_v under d restricted to summand j, then read off summand i of P0
    img_total = d.compose(P1.incs[j])
    # coordinates inside P0, restricted to the block of summand i at vertex v
    vi = A.vertex_index(v)
    col = img_total.maps[vi][:, _pos_in_proj(A, v)]
    offsets = _summand_offsets(A, P0, vi)
    part = col[offsets[i] : offsets[i + 1]]
    idx = projective_basis_index(A, w)
    out = np.zeros(A.dim, dtype=np.int64)
    for b, (u, k) in idx.items():
        if u == A.vertices[vi]:
            out[b] = part[k]
    return out


def _pos_in_proj(A: Algebra, v) -> int:
    return projective_basis_index(A, v)[A.idempotent(v)][1]


def _summand_offsets(A: Algebra, P: ProjCover, vi: int) -> list:
    off = [0]
    for w in P.summands:
        off.append(off[-1] + indec_projective(A, w).dims[vi])
    return off


def nakayama_of_presentation(pres: Presentation) -> ModMorphism:
    """nu(d): nu(P1) -> nu(P0) with nu(P_v) = I_v."""
    A = pres.M.algebra
    P1, P0 = pres.cover1, pres.cover0
    I1, _, pr1 = direct_sum([indec_injective(A, v) for v in P1.summands], A)
    I0, inc0, _ = direct_sum([indec_injective(A, w) for w in P0.summands], A)
    total = ModMorphism.zero(I1, I0)
    for j, v in enumerate(P1.summands):
        for i, w in enumerate(P0.summands):
            pel = _component_element(A, pres.d, P1, P0, j, i)
            if not pel.any():
                continue
            comp = _nu_component(A, pel, v, w)
            total = total + inc0[i].compose(comp.compose(pr1[j]))
    return total


def _nu_component(A: Algebra, pel: np.ndarray, v, w) -> ModMorphism:
    """nu of right multiplication by p in e_v Lambda e_w: I_v -> I_w, xi -> xi(p * -)."""
    Iv, Iw = indec_injective(A, v), indec_injective(A, w)
    maps = []
    for u in A.vertices:
        ys = [b for b in range(A.dim) if A.source(b) == u and A.target(b) == str(v)]
        zs = [b for b in range(A.dim) if A.source(b) == u and A.target(b) == str(w)]
        m = np.zeros((len(zs), len(ys)), dtype=np.int64)
        for r, z in enumerate(zs):
            ez = np.zeros(A.dim, dtype=np.int64)
            ez[z] = 1
            prod = A.multiply(pel, ez)
            for c, y in enumerate(ys):
                m[r, c] = prod[y]
        maps.append(m)
    return ModMorphism(Iv, Iw, maps)


def tau(M: Module, direction: str = "forward") -> Module:
    if direction == "inverse":
        return tau_inv(M)
    if direction != "forward":
        raise ValueError("direction must be 'forward' or 'inverse'")
    A = M.algebra
    if M.dim == 0:
        return zero_module(A)
    pres = presentation(M)
    if pres.cover1.module.dim == 0:
        return zero_module(A)
    K, _ = kernel(nakayama_of_presentation(pres))
    return K


def tau_inv(M: Module) -> Module:
    A = M.algebra
    B = opposite(A)
    T = tau(dual(M, B))
    return dual(T, A)


# Ext^1


@dataclass
class ExtClass:
    """A class in Ext^1(M, N), represented by a map Omega M -> N modulo restrictions from P0."""

    pres: Presentation
    N: Module
    rep: ModMorphism  # Omega M -> N


def _restriction_span(pres: Presentation, N: Module, H: list) -> np.ndarray:
    vecs = []
    for h in hom_basis(pres.cover0.module, N):
        c = morphism_coords(h.compose(pres.omega_inc), H)
        vecs.append(c)
    if not vecs:
        return np.zeros((len(H), 0), dtype=np.int64)
    return np.stack(vecs, axis=1)


def ext1_space(M: Module, N: Module) -> tuple:
    """(dimension, list of ExtClass) for Ext^1(M, N)."""
    F = M.algebra.field
    pres = presentation(M)
    H = hom_basis(pres.omega, N)
    if not H:
        return 0, []
    R = _restriction_span(pres, N, H)
    C = el.complement_basis(F, el.column_space(F, R), len(H))
    classes = []
    for j in range(C.shape[1]):
        rep = ModMorphism.zero(pres.omega, N)
        for k in np.nonzero(C[:, j])[0]:
            rep = rep + H[k].scale(int(C[k, j]))
        classes.append(ExtClass(pres, N, rep))
    return C.shape[1], classes


def ext1_dim(M: Module, N: Module) -> int:
    return ext1_space(M, N)[0]


def pushout(f: ModMorphism, g: ModMorphism) -> tuple:
    """Pushout of f: K -> X and g: K -> Y; returns (E, X -> E, Y -> E)."""
    X, Y = f.target, g.target
    S, incs, _ = direct_sum([X, Y])
    h = incs[0].compose(f) + incs[1].compose(g).scale(-1)
    E, q = cokernel(h)
    return E, q.compose(incs[0]), q.compose(incs[1])


def extension_module(cls: ExtClass) -> tuple:
    """Middle term of 0 -> N -> E -> M -> 0 for the class, with both maps."""
    pres = cls.pres
    E, a, b = pushout(pres.omega_inc, cls.rep)
    # E -> M induced by the cover on P0 and zero on N
    F = pres.M.algebra.field
    maps = []
    for i in range(pres.M.algebra.n_vertices):
        # E_i = (P0_i + N_i) / relations; solve via a
        Ai = np.hstack([a.maps[i], b.maps[i]])
        target = np.hstack([pres.cover0.map.maps[i], np.zeros((pres.M.dims[i], cls.N.dims[i]), dtype=np.int64)])
        if E.dims[i] == 0:
            maps.append(np.zeros((pres.M.dims[i], 0), dtype=np.int64))
            continue
        x = el.solve_linear(F, Ai.T, target.T)
        maps.append(x.T)
    return E, b, ModMorphism(E, pres.M, maps)


# Krull-Schmidt


def _mat_power(F, A: np.ndarray, n: int) -> np.ndarray:
    out = np.eye(A.shape[0], dtype=np.int64)
    base = A.copy()
    while n:
        if n & 1:
            out = F.mul(out, base)
        base = F.mul(base, base)
        n >>= 1
    return out


def _fitting_split(M: Module, f: ModMorphism):
    """Try to split M using the Fitting decomposition of f - lambda."""
    A = M.algebra
    F = A.field
    mat = f.matrix()
    n = M.dim
    for lam in el.char_poly_roots(F, mat):
        g = [(m - lam * np.eye(m.shape[0], dtype=np.int64)) % F.p for m in f.maps]
        gn = [_mat_power(F, m, n) for m in g]
        r = sum(el.rank(F, m) for m in gn)
        if 0 < r < n:
            ker = [el.kernel(F, m) if m.shape[0] else np.zeros((0, 0), dtype=np.int64) for m in gn]
            img = [el.column_space(F, m) for m in gn]
            return ker, img
    return None


def _split_off(M: Module, ker, img):
    A = M.algebra
    F = A.field
    K, ik = submodule(M, ker)
    I, ii = submodule(M, img)
    pk, pi = [], []
    for i in range(A.n_vertices):
        full = np.hstack([ker[i], img[i]])
        inv = el.inverse(F, full) if full.shape[0] else np.zeros((0, 0), dtype=np.int64)
        pk.append(inv[: ker[i].shape[1], :])
        pi.append(inv[ker[i].shape[1] :, :])
    return (K, ik, ModMorphism(M, K, pk)), (I, ii, ModMorphism(M, I, pi))


def _find_splitting(M: Module, rng: np.random.Generator, tries: int = 6):
    E = hom_basis(M, M)
    if len(E) <= 1:
        return None
    cands = list(E)
    F = M.algebra.field
    for _ in range(tries):
        c = rng.integers(0, F.p, size=len(E))
        f = ModMorphism.zero(M, M)
        for ci, e in zip(c, E):
            f = f + e.scale(int(ci))
        cands.append(f)
    for f in cands:
        s = _fitting_split(M, f)
        if s is not None:
            return s
    return None


def decompose_with_maps(M: Module, seed: int = _SEED) -> list:
    """Indecomposable summands as (module, inclusion into M, projection from M)."""
    rng = np.random.default_rng(seed)
    out = []
    stack = [(M, ModMorphism.identity(M), ModMorphism.identity(M))]
    while stack:
        X, inc, proj = stack.pop()
        if X.dim == 0:
            continue
        s = _find_splitting(X, rng)
        if s is None:
            out.append((X, inc, proj))
            continue
        (K, ik, pk), (I, ii, pi) = _split_off(X, *s)
        stack.append((I, inc.compose(ii), pi.compose(proj)))
        stack.append((K, inc.compose(ik), pk.compose(proj)))
    return out


def is_indecomposable(M: Module) -> bool:
    return M.dim > 0 and _find_splitting(M, np.random.default_rng(_SEED)) is None


def find_iso(M: Module, N: Module, seed: int = _SEED, tries: int = 4) -> Optional[ModMorphism]:
    if M.dims != N.dims:
        return None
    if M.dim == 0:
        return ModMorphism.zero(M, N)
    H = hom_basis(M, N)
    if not H:
        return None
    rng = np.random.default_rng(seed)
    F = M.algebra.field
    for t in range(tries):
        c = rng.integers(0, F.p, size=len(H)) if t or len(H) > 1 else np.ones(1, dtype=np.int64)
        f = ModMorphism.zero(M, N)
        for ci, h in zip(c, H):
            f = f + h.scale(int(ci))
        if f.is_iso():
            return f
    return None


def is_isomorphic(M: Module, N: Module) -> bool:
    return find_iso(M, N) is not None


def decompose(M: Module) -> list:
    """Multiset of indecomposable summands: list of (module, multiplicity)."""
    groups: list = []
    for X, _, _ in decompose_with_maps(M):
        for g in groups:
            if is_isomorphic(g[0], X):
                g[1] += 1
                break
        else:
            groups.append([X, 1])
    return [(X, m) for X, m in groups]


def radical_endomorphisms(M: Module) -> list:
    """Basis of rad End(M) for M indecomposable with End(M)/rad = k (trace-zero part)."""
    F = M.algebra.field
    E = hom_basis(M, M)
    if not E:
        return []
    tr = np.array([[int(np.trace(e.matrix()) % F.p) for e in E]], dtype=np.int64)
    K = el.kernel(F, tr)
    out = []
    for j in range(K.shape[1]):
        f = ModMorphism.zero(M, M)
        for k in np.nonzero(K[:, j])[0]:
            f = f + E[k].scale(int(K[k, j]))
        out.append(f)
    return out


def is_projective_indec(M: Module) -> bool:
    A = M.algebra
    rad = radical_spaces(M)
    top = [M.dims[i] - rad[i].shape[1] for i in range(A.n_vertices)]
    if sum(top) != 1:
        return False
    v = A.vertices[top.index(1)]
    return indec_projective(A, v).dims == M.dims


def is_injective_indec(M: Module) -> bool:
    A = M.algebra
    soc = socle_spaces(M)
    s = [x.shape[1] for x in soc]
    if sum(s) != 1:
        return False
    v = A.vertices[s.index(1)]
    return indec_injective(A, v).dims == M.dims


def lift_through(F, target_map: ModMorphism, f: ModMorphism, basis: list) -> Optional[ModMorphism]:
    """Find h in span(basis) with target_map o h = f."""
    if not basis:
        return ModMorphism.zero(f.source, target_map.source) if f.is_zero() else None
    cols = np.stack([target_map.compose(b).vector() for b in basis], axis=1)
    x = el.solve_linear(F, cols, f.vector())
    if x is None:
        return None
    h = ModMorphism.zero(basis[0].source, basis[0].target)
    for k in np.nonzero(x)[0]:
        h = h + basis[k].scale(int(x[k]))
    return h


def almost_split_sequence(Z: Module) -> tuple:
    """For Z indecomposable non-projective: (tau Z, E, tau Z -> E, E -> Z)."""
    A = Z.algebra
    F = A.field
    pres = presentation(Z)
    Y = tau(Z)
    H = hom_basis(pres.omega, Y)
    R = el.column_space(F, _restriction_span(pres, Y, H))
    m = len(H)
    C = el.complement_basis(F, R, m)
    Q = el.inverse(F, np.hstack([R, C]))[R.shape[1] :, :]  # quotient coordinates
    P0 = pres.cover0.module
    Pend = hom_basis(P0, P0)
    conds = []
    for r in radical_endomorphisms(Z):
        r0 = lift_through(F, pres.cover0.map, r.compose(pres.cover0.map), Pend)
        # restrict r0 to Omega
        rest = r0.compose(pres.omega_inc)
        maps = []
        for i in range(A.n_vertices):
            if pres.omega.dims[i] == 0:
                maps.append(np.zeros((0, 0), dtype=np.int64))
                continue
            maps.append(el.solve_linear(F, pres.omega_inc.maps[i], rest.maps[i]))
        r1 = ModMorphism(pres.omega, pres.omega, maps)
        act = np.stack([morphism_coords(h.compose(r1), H) for h in H], axis=1)
        conds.append(F.mul(Q, act))
    S = el.kernel(F, np.vstack(conds)) if conds else np.eye(m, dtype=np.int64)
    chosen = None
    for j in range(S.shape[1]):
        if F.mul(Q, S[:, j : j + 1]).any():
            chosen = S[:, j]
            break
    if chosen is None:
        raise RuntimeError("no almost split class found")
    rep = ModMorphism.zero(pres.omega, Y)
    for k in np.nonzero(chosen)[0]:
        rep = rep + H[k].scale(int(chosen[k]))
    E, a, b = extension_module(ExtClass(pres, Y, rep))
    return Y, E, a, b
