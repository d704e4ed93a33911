"""Exact arithmetic and numeric substrate: polynomials, linear algebra,
root finding, rational reconstruction."""

from .poly import BilinearForm, TernaryCubic, TriPoly, act_cubic, MONOMIALS, MONOMIAL_ORDER_TAG
from .linalg import kernel_basis, primitive_vector
from .unipoly import UniPoly, resultant
from .numerics import DEFAULT_PRECISION, complex_roots
from .reconstruct import rational_reconstruct

__all__ = [
    "BilinearForm", "TernaryCubic", "TriPoly", "act_cubic",
    "MONOMIALS", "MONOMIAL_ORDER_TAG",
    "kernel_basis", "primitive_vector",
    "UniPoly", "resultant",
    "DEFAULT_PRECISION", "complex_roots",
    "rational_reconstruct",
]
