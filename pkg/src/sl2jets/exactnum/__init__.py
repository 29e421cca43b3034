"""Exact arithmetic over the Gaussian rationals Q(i)."""

from .linalg import (
    as_matrix, block_diag, det, exact_nullspace, hstack, identity, inverse, is_zero_matrix,
    kron, mat_eq, mat_str, matadd, matmul, matscale, matsub, matvec, rank, rref, shape,
    solve, transpose, vstack, zeros,
)
from .poly import Poly, RatFun, as_ratfun, interpolate, poly_gcd
from .scalar import I, ONE, ZERO, GaussianRational, format_scalar, gr, parse_scalar
from .series import TruncSeries, series_compose, series_mul, series_reciprocal

__all__ = [
    "GaussianRational", "gr", "parse_scalar", "format_scalar", "ZERO", "ONE", "I",
    "Poly", "RatFun", "as_ratfun", "interpolate", "poly_gcd",
    "TruncSeries", "series_mul", "series_compose", "series_reciprocal",
    "as_matrix", "zeros", "identity", "shape", "transpose", "matmul", "matvec", "matadd",
    "matsub", "matscale", "mat_eq", "is_zero_matrix", "kron", "block_diag", "hstack",
    "vstack", "mat_str", "rref", "rank", "det", "inverse", "solve", "exact_nullspace",
]
