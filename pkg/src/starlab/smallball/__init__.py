"""Small-ball searches: extremal sign assignments of hyperbolic sums, random-coefficient estimates and exponent fits.

:Module: starlab.smallball
"""
from starlab.smallball.fitting import DegenerateFitError, ExponentFit, LinearFit, exponent_fit, linear_fit
from starlab.smallball.problem import (
    SEARCH_METHODS,
    SearchBudgetError,
    SearchResult,
    SignedSum,
    certified_lower_bound,
    decode_signs,
    encode_signs,
    l2_floor,
)
from starlab.smallball.search import FloorViolationError, exhaustive_min, local_search, sign_expectation_exact
from starlab.smallball.bnb import SignAssignmentProblem, branch_and_bound
from starlab.smallball.montecarlo import COEFFICIENT_MODELS, SparseSignedSample, mc_expectation, signed_sparse_sup

__all__ = [
    "DegenerateFitError",
    "ExponentFit",
    "exponent_fit",
    "LinearFit",
    "linear_fit",
    "SEARCH_METHODS",
    "SearchBudgetError",
    "SearchResult",
    "SignedSum",
    "certified_lower_bound",
    "decode_signs",
    "encode_signs",
    "l2_floor",
    "FloorViolationError",
    "exhaustive_min",
    "local_search",
    "sign_expectation_exact",
    "SignAssignmentProblem",
    "branch_and_bound",
    "COEFFICIENT_MODELS",
    "SparseSignedSample",
    "mc_expectation",
    "signed_sparse_sup",
]
