"""Exact scalars, matrices and polynomials."""

from .domains import (
    GF,
    QQ,
    ZZ,
    Domain,
    ExtElem,
    Fp,
    Integers,
    PrimeField,
    Rationals,
    SimpleExtension,
    format_polynomial,
    parse_domain,
    polynomial_coefficients,
)
from .matrix import Matrix, det, kron, rank_and_kernel, row_reduce, span_rank
from .poly import MultiPoly, poly_det

__all__ = [
    "GF",
    "QQ",
    "ZZ",
    "Domain",
    "ExtElem",
    "Fp",
    "Integers",
    "Matrix",
    "MultiPoly",
    "PrimeField",
    "Rationals",
    "SimpleExtension",
    "det",
    "format_polynomial",
    "kron",
    "parse_domain",
    "poly_det",
    "polynomial_coefficients",
    "rank_and_kernel",
    "row_reduce",
    "span_rank",
]
