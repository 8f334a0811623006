"""Exact arithmetic layer: Q(i) scalars, matrices, polynomials, series, Pfaffians."""

from .gaussian import I, ONE, ZERO, GaussianRational, coerce_vector, format_scalar, parse_scalar
from .linalg import (
    NO_SOLUTION,
    DimensionError,
    ExactMatrix,
    NoSolution,
    RankKernelImage,
    determinant,
    image_basis,
    in_span,
    kernel_basis,
    rank_kernel_image,
    rref,
    solve_linear,
)
from .pfaffian import NotSkew, linear_combination, pfaffian, pfaffian_expansion
from .poly import SparsePoly
from .series import TruncatedSeries, geometric_series, series_expand_power

__all__ = [
    "I",
    "ONE",
    "ZERO",
    "GaussianRational",
    "coerce_vector",
    "format_scalar",
    "parse_scalar",
    "NO_SOLUTION",
    "DimensionError",
    "ExactMatrix",
    "NoSolution",
    "RankKernelImage",
    "determinant",
    "image_basis",
    "in_span",
    "kernel_basis",
    "rank_kernel_image",
    "rref",
    "solve_linear",
    "NotSkew",
    "linear_combination",
    "pfaffian",
    "pfaffian_expansion",
    "SparsePoly",
    "TruncatedSeries",
    "geometric_series",
    "series_expand_power",
]
