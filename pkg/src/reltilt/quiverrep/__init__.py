"""Bound quiver algebras, their modules, and AR theory."""

from .algebra import (
    CONVENTION_NOTE,
    Algebra,
    AlgebraError,
    Arrow,
    Quiver,
    algebra_from_descriptor,
    build_algebra,
    disjoint_union,
)
from .ar import Catalogue, RepresentationInfiniteError, ar_quiver, ar_quiver_dot, indecomposables
from .homological import (
    ExtClass,
    almost_split_sequence,
    decompose,
    decompose_with_maps,
    ext1_dim,
    ext1_space,
    extension_module,
    find_iso,
    is_indecomposable,
    is_isomorphic,
    presentation,
    projective_cover,
    radical_endomorphisms,
    tau,
    tau_inv,
)
from .module import (
    ModMorphism,
    Module,
    cokernel,
    direct_sum,
    dual,
    fac_contains,
    hom_basis,
    hom_dim,
    image,
    kernel,
    standard_module,
)

__all__ = [name for name in dir() if not name.startswith("_")]
