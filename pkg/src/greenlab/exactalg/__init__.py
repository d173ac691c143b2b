"""Exact arithmetic: Q(i), polynomials, rational functions, integer and function matrices."""

from .gaussian import GaussianRational, Rational, I, ONE, ZERO
from .poly import (DivisionByZero, MultiPoly, NotDivisible, RationalFunction, poly_gcd, rf_arith,
                   rf_partial)
from .intmat import IntMatrix, hnf, hnf_basis, left_kernel, right_kernel, saturate_rows, snf
from .funmatrix import FunMatrix, rank_exact, rank_lower_bound
from .factor import (FactorizationBoundExceeded, ZeroInput, coprime_basis, gaussian_unit_lattice,
                     valuation_matrix)

__all__ = [
    "GaussianRational", "Rational", "I", "ONE", "ZERO",
    "DivisionByZero", "MultiPoly", "NotDivisible", "RationalFunction", "poly_gcd", "rf_arith",
    "rf_partial",
    "IntMatrix", "hnf", "hnf_basis", "left_kernel", "right_kernel", "saturate_rows", "snf",
    "FunMatrix", "rank_exact", "rank_lower_bound",
    "FactorizationBoundExceeded", "ZeroInput", "coprime_basis", "gaussian_unit_lattice",
    "valuation_matrix",
]
