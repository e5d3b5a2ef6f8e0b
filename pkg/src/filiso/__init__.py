"""Exact computations with filtered isocrystals over F_p.

Filtrations, Newton slopes, weak admissibility, Harder-Narasimhan and
Fargues filtrations, strongly divisible lattices and Mazur's inequality,
all in exact rational arithmetic.
"""

__version__ = "0.1.0"

from .admissibility import (
    FilteredIsocrystal,
    WaVerdict,
    check_scalar_inequalities,
    hn_filtration,
    is_weakly_admissible,
    verify_hn_identity,
    xi_from,
)
from .fargues import (
    FarguesResult,
    check_perturbation_inequality,
    check_projection_optimality,
    fargues_degree,
    fargues_filtration,
    fargues_tensor_check,
    is_wa_subobject,
)
from .filtration import (
    Filtration,
    Graduation,
    TypeVector,
    degree,
    dist_sq,
    dominance_leq,
    norm_sq,
    restrict,
    scalar_product,
    tensor_filtration,
    type_of,
)
from .isocrystal import Isocrystal, make_isocrystal, newton, split_from_eigen
from .lattice_dynamics import OrbitReport, alpha, is_strongly_divisible, orbit_probe, plus_op, sd_tensor_check
from .linalg import Lattice, Matrix, Subspace, relative_position, smith_exponents
from .mazur import adm_search, mazur_check, mu_sharp
from .scalars import NewtonPolygon, Q, newton_polygon, vp

__all__ = [
    "FilteredIsocrystal", "WaVerdict", "check_scalar_inequalities", "hn_filtration", "is_weakly_admissible",
    "verify_hn_identity", "xi_from", "FarguesResult", "check_perturbation_inequality",
    "check_projection_optimality", "fargues_degree", "fargues_filtration", "fargues_tensor_check",
    "is_wa_subobject", "Filtration", "Graduation", "TypeVector", "degree", "dist_sq", "dominance_leq",
    "norm_sq", "restrict", "scalar_product", "tensor_filtration", "type_of", "Isocrystal", "make_isocrystal",
    "newton", "split_from_eigen", "OrbitReport", "alpha", "is_strongly_divisible", "orbit_probe", "plus_op",
    "sd_tensor_check", "Lattice", "Matrix", "Subspace", "relative_position", "smith_exponents", "adm_search",
    "mazur_check", "mu_sharp", "NewtonPolygon", "Q", "newton_polygon", "vp",
]
