"""Exact arithmetic: prime fields, forms, factored integers, integer matrices, abelian groups."""

from .abgroups import (
    AbHom,
    FiniteAbGroup,
    SubgroupImage,
    group_from_relations,
    image_subgroup,
    merge_invariant_factors,
    quotient_by_subgroup,
)
from .factored import FactoredInt, trial_factor
from .fields import NON_RESIDUE, ROOT, ZERO, Fp2Elem, FpElem, legendre, legendre_and_sqrt, sqrt_mod
from .forms import ZeroFormError, factor_profile
from .intlinalg import hnf, kernel_lattice, smith_normal_form

__all__ = [
    "AbHom",
    "FactoredInt",
    "FiniteAbGroup",
    "Fp2Elem",
    "FpElem",
    "NON_RESIDUE",
    "ROOT",
    "SubgroupImage",
    "ZERO",
    "ZeroFormError",
    "factor_profile",
    "group_from_relations",
    "hnf",
    "image_subgroup",
    "kernel_lattice",
    "legendre",
    "legendre_and_sqrt",
    "merge_invariant_factors",
    "quotient_by_subgroup",
    "smith_normal_form",
    "sqrt_mod",
    "trial_factor",
]
