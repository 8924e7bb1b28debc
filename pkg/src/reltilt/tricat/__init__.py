"""Triangulated categories given combinatorially: stable categories and orbit categories."""

from typing import Mapping, Optional

from ..exactlin import Field
from ..quiverrep.algebra import Algebra, algebra_from_descriptor
from .base import (
    Backend,
    TriApprox,
    TriCatError,
    TriMorphism,
    TriObject,
    Triangle,
    apply_functor,
    canonical_T_triangle,
    check_triangle,
    complete_triangle,
    cone,
    cone_object,
    hom_space_dim,
    ideal_basis,
    ideal_dim,
    in_ideal,
    is_approximation,
    is_minimal_approximation,
    minimal_approx,
    obj,
    obj_names,
    rigidity,
    shift,
    tri_compose,
    tri_hom,
)
from .orbit import OrbitBackend, is_dynkin
from .stable import StableBackend


def make_backend(desc: Mapping, field: Optional[Field] = None, length_cap: int = 30, knit_cap: int = 10000) -> Backend:
    """Build a backend from ``{"kind": "stable", "algebra": ...}`` or
    ``{"kind": "orbit", "quiver": ..., "tau_power": a, "shift_power": b}``.

    ``algebra``/``quiver`` may be an Algebra or an algebra descriptor.
    """
    kind = desc.get("kind")
    if kind == "stable":
        A = desc.get("algebra")
        if A is None:
            raise TriCatError("stable descriptor needs 'algebra'")
        if not isinstance(A, Algebra):
            A = algebra_from_descriptor(A, field, length_cap)
        return StableBackend(A, knit_cap)
    if kind == "orbit":
        A = desc.get("quiver")
        if A is None:
            raise TriCatError("orbit descriptor needs 'quiver'")
        if not isinstance(A, Algebra):
            A = algebra_from_descriptor(A, field, length_cap)
        for k in ("tau_power", "shift_power"):
            if k not in desc:
                raise TriCatError(f"orbit descriptor needs '{k}'")
        return OrbitBackend(A, int(desc["tau_power"]), int(desc["shift_power"]))
    raise TriCatError(f"unknown backend kind {kind!r}")


def objects(B: Backend) -> list:
    return list(B.labels)


def ar_quiver_dot(B: Backend) -> str:
    """AR quiver of the backend; tau drawn dashed."""
    lines = ["digraph AR {", "  rankdir=LR;"]
    for i, l in enumerate(B.labels):
        lines.append(f'  n{i} [label="{l}"];')
    if isinstance(B, OrbitBackend):
        arrows = B.ar_arrows()
    else:
        cat = B.cat
        arrows = sorted(
            {(B.of_cat[i], B.of_cat[j]) for (i, j) in cat.arrows if i in B.of_cat and j in B.of_cat}
        )
    for i, j in arrows:
        lines.append(f"  n{i} -> n{j};")
    for i in range(B.n):
        lines.append(f"  n{i} -> n{B.tau_label(i)} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [name for name in dir() if not name.startswith("_")]
