"""Classical covariant machinery for plane cubics.

hessian and caylean are the two determinant constructions everything else
leans on.  Pencils (two cubics spanning a line of forms), their singular
members, j-invariants along a pencil, and exact linear equivalence testing
round out the toolbox.
"""

from .forms import (
    Pencil,
    canonical_parameter,
    caylean,
    dual_pencil,
    hessian,
)
from .singular import is_singular, singular_members
from .jinvariant import (
    j_map_on_pencil,
    j_numeric,
    j_on_pencil,
    j_solve_on_pencil,
    parameter_correspondence,
)
from .equivalence import linear_equivalence

__all__ = [
    "Pencil",
    "canonical_parameter",
    "caylean",
    "dual_pencil",
    "hessian",
    "is_singular",
    "singular_members",
    "j_map_on_pencil",
    "j_numeric",
    "j_on_pencil",
    "j_solve_on_pencil",
    "linear_equivalence",
    "parameter_correspondence",
]
