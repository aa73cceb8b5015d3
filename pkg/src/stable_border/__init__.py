"""Stable order ideals and border bases for vanishing ideals of empirical points."""

from .basis import (
    BorderBasis,
    NotAQuotientBasisError,
    SingularEvaluationError,
    StabilityReport,
    border_basis,
    estimate_stability_radius,
    evaluation_matrix,
    verify_stability,
)
from .bm import ExactPolynomial, ExactPolynomialBasis, bm_quotient_basis
from .folinalg import Arithmetic
from .monomial import DEGLEX, PowerProduct, TermOrdering, border, compare, corners, divides, is_order_ideal, parse_term
from .points import EmpiricalPointSet, are_distinct, sample_admissible, validate, weighted_norm
from .soi import SOIResult, accept_test, soi, update_candidates

__version__ = "0.1.0"
