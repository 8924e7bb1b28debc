"""Stable module category of a self-injective algebra.

Objects are the nonprojective indecomposables of the algebra's catalogue.
Hom spaces are Hom_A modulo maps factoring through a projective; each stable
basis vector is represented by a fixed module map.  The shift is the
cosyzygy, computed from an injective hull, and its inverse is the syzygy.
"""

from __future__ import annotations

import numpy as np

from .. import exactlin as el
from ..quiverrep.algebra import Algebra
from ..quiverrep.ar import DEFAULT_KNIT_CAP, indecomposables
from ..quiverrep.homological import decompose_with_maps, find_iso, projective_cover, pushout
from ..quiverrep.module import (
    ModMorphism,
    Module,
    cokernel,
    direct_sum,
    dual,
    hom_basis,
    kernel,
    morphism_coords,
    opposite,
)
from .base import Backend, TriCatError, TriMorphism, TriObject, Triangle


def injective_hull(M: Module) -> ModMorphism:
    """Injective envelope M -> I, dual to the projective cover of DM."""
    op = opposite(M.algebra)
    cov = projective_cover(dual(M, op))
    I = dual(cov.module, M.algebra)
    return ModMorphism(M, I, [m.T.copy() for m in cov.map.maps])


def _lift_through(F, known: ModMorphism, basis: list, rhs: ModMorphism) -> ModMorphism:
    """Some g in span(basis) with g o known = rhs."""
    cols = np.stack([b.compose(known).vector() for b in basis], axis=1) if basis else None
    if cols is None:
        if rhs.vector().any():
            raise TriCatError("lift does not exist")
        return None
    c = el.solve_linear(F, cols, rhs.vector())
    if c is None:
        raise TriCatError("lift does not exist")
    g = ModMorphism.zero(basis[0].source, basis[0].target)
    for ci, b in zip(c, basis):
        if ci:
            g = g + b.scale(int(ci))
    return g


def _induced_on_quotient(F, qs: ModMorphism, qt: ModMorphism, g: ModMorphism) -> ModMorphism:
    """The map h with h o qs = qt o g, for qs surjective."""
    B = qt.compose(g)
    maps = []
    for i in range(len(qs.maps)):
        if qs.maps[i].shape[0] == 0 or B.maps[i].shape[0] == 0:
            maps.append(np.zeros((B.maps[i].shape[0], qs.maps[i].shape[0]), dtype=np.int64))
            continue
        x = el.solve_linear(F, qs.maps[i].T, B.maps[i].T)
        maps.append(x.T)
    return ModMorphism(qs.target, qt.target, maps)


def _induced_on_sub(F, it: ModMorphism, is_: ModMorphism, g: ModMorphism) -> ModMorphism:
    """The map h with it o h = g o is_, for it injective."""
    B = g.compose(is_)
    maps = []
    for i in range(len(it.maps)):
        if it.maps[i].shape[1] == 0 or B.maps[i].shape[1] == 0:
            maps.append(np.zeros((it.maps[i].shape[1], B.maps[i].shape[1]), dtype=np.int64))
            continue
        maps.append(el.solve_linear(F, it.maps[i], B.maps[i]))
    return ModMorphism(is_.source, it.source, maps)


class StableBackend(Backend):
    kind = "stable"

    def __init__(self, algebra: Algebra, knit_cap: int = DEFAULT_KNIT_CAP):
        self.algebra = algebra
        self.field = algebra.field
        self.cat = indecomposables(algebra, knit_cap)
        proj = set(self.cat.projective.values())
        if proj != set(self.cat.injective.values()):
            raise TriCatError("algebra is not self-injective")
        self.ids = [i for i in range(len(self.cat)) if i not in proj]
        self.of_cat = {c: k for k, c in enumerate(self.ids)}
        self.labels = [self.cat.name(c) for c in self.ids]
        self.modules = [self.cat.modules[c] for c in self.ids]
        self._basis: dict = {}
        self._comp: dict = {}
        self._shift: dict = {}
        self._shift_data: dict = {}
        self._fmat: dict = {}

    # stable Hom

    def _hom_data(self, x: int, y: int) -> tuple:
        """(module Hom basis, stable representatives, reduction matrix R)."""
        key = (x, y)
        if key not in self._basis:
            F = self.field
            X, Y = self.modules[x], self.modules[y]
            H = hom_basis(X, Y)
            n = len(H)
            cov = projective_cover(Y)
            thru = [cov.map.compose(h) for h in hom_basis(X, cov.module)]
            P = np.stack([morphism_coords(t, H) for t in thru], axis=1) if thru and n else np.zeros((n, 0), dtype=np.int64)
            Pb = el.column_space(F, P) if P.size else np.zeros((n, 0), dtype=np.int64)
            C = el.complement_basis(F, Pb, n)
            reps = []
            for c in range(C.shape[1]):
                f = ModMorphism.zero(X, Y)
                for k in np.nonzero(C[:, c])[0]:
                    f = f + H[k].scale(int(C[k, c]))
                reps.append(f)
            if n:
                R = el.inverse(F, np.hstack([C, Pb]))[: C.shape[1], :]
            else:
                R = np.zeros((0, 0), dtype=np.int64)
            self._basis[key] = (H, reps, R)
        return self._basis[key]

    def hom_dim(self, x: int, y: int) -> int:
        return len(self._hom_data(x, y)[1])

    def stable_coords(self, f: ModMorphism, x: int, y: int) -> np.ndarray:
        H, reps, R = self._hom_data(x, y)
        if not reps:
            return np.zeros(0, dtype=np.int64)
        c = morphism_coords(f, H)
        if c is None:
            raise TriCatError("not a homomorphism between the representatives")
        return self.field.mul(R, c.reshape(-1, 1))[:, 0]

    def representative(self, x: int, y: int, v: np.ndarray) -> ModMorphism:
        _, reps, _ = self._hom_data(x, y)
        f = ModMorphism.zero(self.modules[x], self.modules[y])
        for ci, r in zip(v, reps):
            if ci % self.field.p:
                f = f + r.scale(int(ci))
        return f

    def comp(self, x: int, y: int, z: int) -> np.ndarray:
        key = (x, y, z)
        if key not in self._comp:
            Rxy = self._hom_data(x, y)[1]
            Ryz = self._hom_data(y, z)[1]
            d = self.hom_dim(x, z)
            C = np.zeros((len(Ryz), len(Rxy), d), dtype=np.int64)
            for b, g in enumerate(Ryz):
                for a, f in enumerate(Rxy):
                    C[b, a] = self.stable_coords(g.compose(f), x, z)
            self._comp[key] = C
        return self._comp[key]

    def identity(self, x: int) -> np.ndarray:
        return self.stable_coords(ModMorphism.identity(self.modules[x]), x, x)

    # shift, tau

    def _identify(self, M: Module) -> tuple:
        """(stable id, iso M -> representative) for an indecomposable nonprojective M."""
        c = self.cat.find(M)
        if c is None or c not in self.of_cat:
            raise TriCatError(f"{M.name()} is not a nonprojective indecomposable")
        return self.of_cat[c], find_iso(M, self.cat.modules[c])

    def _step(self, x: int, sign: int) -> dict:
        """Data for one shift step of x: cosyzygy for +1, syzygy for -1."""
        key = (x, sign)
        if key not in self._shift_data:
            M = self.modules[x]
            if sign > 0:
                iota = injective_hull(M)
                C, q = cokernel(iota)
                y, sigma = self._identify(C)
                self._shift_data[key] = dict(target=y, emb=iota, quot=q, sigma=sigma)
            else:
                cov = projective_cover(M)
                K, inc = kernel(cov.map)
                y, sigma = self._identify(K)
                self._shift_data[key] = dict(target=y, cover=cov.map, inc=inc, sigma=sigma)
        return self._shift_data[key]

    def shift_label(self, x: int, n: int = 1) -> int:
        for _ in range(abs(n)):
            x = self._step(x, 1 if n > 0 else -1)["target"]
        return x

    def tau_label(self, x: int, n: int = 1) -> int:
        c = self.ids[x]
        for _ in range(abs(n)):
            c = self.cat.tau[c] if n > 0 else self.cat.tau_inv[c]
        return self.of_cat[c]

    def _shift_module_map(self, f: ModMorphism, x: int, y: int, sign: int) -> ModMorphism:
        F = self.field
        dx, dy = self._step(x, sign), self._step(y, sign)
        if sign > 0:
            g = _lift_through(F, dx["emb"], hom_basis(dx["emb"].target, dy["emb"].target), dy["emb"].compose(f))
            if g is None:
                return ModMorphism.zero(self.modules[dx["target"]], self.modules[dy["target"]])
            h = _induced_on_quotient(F, dx["quot"], dy["quot"], g)
        else:
            basis = hom_basis(dx["cover"].source, dy["cover"].source)
            cols = np.stack([dy["cover"].compose(b).vector() for b in basis], axis=1) if basis else None
            rhs = f.compose(dx["cover"])
            if cols is None:
                return ModMorphism.zero(self.modules[dx["target"]], self.modules[dy["target"]])
            c = el.solve_linear(F, cols, rhs.vector())
            if c is None:
                raise TriCatError("lift to projective covers failed")
            g = ModMorphism.zero(basis[0].source, basis[0].target)
            for ci, b in zip(c, basis):
                if ci:
                    g = g + b.scale(int(ci))
            h = _induced_on_sub(F, dy["inc"], dx["inc"], g)
        return dy["sigma"].compose(h).compose(dx["sigma"].inverse())

    def functor_on_hom(self, which: str, x: int, y: int) -> np.ndarray:
        from .base import _functor_kind

        kind, n = _functor_kind(which)
        d = self.hom_dim(x, y)
        if kind == "F" or (kind == "shift" and n == 0):
            return np.eye(d, dtype=np.int64)
        if kind != "shift":
            raise NotImplementedError("stable backend transports only shifts on morphisms")
        key = (x, y, n)
        if key not in self._fmat:
            sign = 1 if n > 0 else -1
            M = np.eye(d, dtype=np.int64)
            a, b = x, y
            for _ in range(abs(n)):
                a2, b2 = self.shift_label(a, sign), self.shift_label(b, sign)
                cols = [
                    self.stable_coords(self._shift_module_map(self.representative(a, b, e), a, b, sign), a2, b2)
                    for e in np.eye(self.hom_dim(a, b), dtype=np.int64)
                ]
                S = np.stack(cols, axis=1) if cols else np.zeros((self.hom_dim(a2, b2), 0), dtype=np.int64)
                M = self.field.mul(S, M)
                a, b = a2, b2
            self._fmat[key] = M
        return self._fmat[key]

    # modules of TriObjects

    def module_of(self, X: TriObject) -> tuple:
        return direct_sum([self.modules[i] for i in X.summands], self.algebra)

    def module_map(self, f: TriMorphism) -> ModMorphism:
        S, sinc, sproj = self.module_of(f.source)
        T, tinc, tproj = self.module_of(f.target)
        out = ModMorphism.zero(S, T)
        for ti, t in enumerate(f.target.summands):
            for si, s in enumerate(f.source.summands):
                v = f.blocks[ti][si]
                if v.any():
                    out = out + tinc[ti].compose(self.representative(s, t, v)).compose(sproj[si])
        return out

    def tri_morphism(self, f: ModMorphism, X: TriObject, Y: TriObject, xinc=None, yproj=None) -> TriMorphism:
        """Stable class of a module map between realizations of X and Y."""
        if xinc is None:
            _, xinc, _ = self.module_of(X)
        if yproj is None:
            _, _, yproj = self.module_of(Y)
        blocks = [
            [self.stable_coords(yproj[ti].compose(f).compose(xinc[si]), s, t) for si, s in enumerate(X.summands)]
            for ti, t in enumerate(Y.summands)
        ]
        return TriMorphism(self, X, Y, blocks)

    def cone(self, f: TriMorphism) -> Triangle:
        """Pushout of the injective hull of X along f."""
        X, Y = f.source, f.target
        fm = self.module_map(f)
        steps = [self._step(x, 1) for x in X.summands]
        Xm, xinc, xproj = self.module_of(X)
        I, iinc, iproj = direct_sum([s["emb"].target for s in steps], self.algebra)
        iota = ModMorphism.zero(Xm, I)
        for k, s in enumerate(steps):
            iota = iota + iinc[k].compose(s["emb"]).compose(xproj[k])
        E, y_to_e, i_to_e = pushout(fm, iota)
        # E -> X[1]: zero on Y, the cokernel map on I
        X1 = TriObject(tuple(s["target"] for s in steps))
        X1m, x1inc, _ = self.module_of(X1)
        qI = ModMorphism.zero(I, X1m)
        for k, s in enumerate(steps):
            qI = qI + x1inc[k].compose(s["sigma"]).compose(s["quot"]).compose(iproj[k])
        F = self.field
        maps = []
        for i in range(self.algebra.n_vertices):
            if E.dims[i] == 0:
                maps.append(np.zeros((X1m.dims[i], 0), dtype=np.int64))
                continue
            Ai = np.hstack([y_to_e.maps[i], i_to_e.maps[i]])
            rhs = np.hstack([np.zeros((X1m.dims[i], fm.target.dims[i]), dtype=np.int64), qI.maps[i]])
            maps.append(el.solve_linear(F, Ai.T, rhs.T).T)
        e_to_x1 = ModMorphism(E, X1m, maps)
        parts, cinc, cproj = [], [], []
        for Z, inc, proj in decompose_with_maps(E):
            c = self.cat.find(Z)
            if c is None:
                raise TriCatError("cone summand not in the catalogue")
            if self.cat.is_projective(c):
                continue
            z, sigma = self.of_cat[c], find_iso(Z, self.cat.modules[c])
            parts.append(z)
            cinc.append(inc.compose(sigma.inverse()))
            cproj.append(sigma.compose(proj))
        C = TriObject(tuple(parts))
        _, _, yproj = self.module_of(Y)
        g_blocks = [
            [self.stable_coords(cproj[ti].compose(y_to_e).compose(self._inc(Y, si)), s, t) for si, s in enumerate(Y.summands)]
            for ti, t in enumerate(parts)
        ]
        _, _, x1proj = self.module_of(X1)
        h_blocks = [
            [self.stable_coords(x1proj[ti].compose(e_to_x1).compose(cinc[si]), s, t) for si, s in enumerate(parts)]
            for ti, t in enumerate(X1.summands)
        ]
        g = TriMorphism(self, Y, C, g_blocks)
        h = TriMorphism(self, C, X1, h_blocks)
        return Triangle(X, Y, C, f, g, h)

    def _inc(self, Y: TriObject, k: int) -> ModMorphism:
        return self.module_of(Y)[1][k]
