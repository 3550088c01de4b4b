"""Exact multidimensional continued fraction expansions over real algebraic fields."""

from .errors import RepetendError
from .linalg import ExactMatrix, mat_pow, permutation_matrix, transvection
from .polynomial import Polynomial, parse_polynomial
from .realfield import FieldElement, NumberField, make_field

__all__ = [
    "ExactMatrix",
    "FieldElement",
    "NumberField",
    "Polynomial",
    "RepetendError",
    "make_field",
    "mat_pow",
    "parse_polynomial",
    "permutation_matrix",
    "transvection",
]
