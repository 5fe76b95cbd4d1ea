"""The discrepancy function: evaluation, exact norms, Haar coefficients and sampled norms.

:Module: starlab.discrepancy
"""
from starlab.discrepancy.field import DiscrepancyField, critical_grid
from starlab.discrepancy.exact import (
    PairBudgetError,
    SignOptimalRFunction,
    StarDiscrepancyBudgetError,
    StarDiscrepancyResult,
    haar_coefficient,
    haar_coefficients,
    l2_norm_exact,
    l2_squared_exact,
    lemma1_rfunction,
    partial_parseval,
    star_discrepancy_exact,
)
from starlab.discrepancy.sampled import (
    SampledEstimate,
    default_resolution,
    evaluation_levels,
    finest_gap,
    lp_norm_sampled,
    orlicz_norm_sampled,
    sample_discrepancy,
    superlevel_measure,
)

__all__ = [
    "DiscrepancyField",
    "critical_grid",
    "PairBudgetError",
    "SignOptimalRFunction",
    "StarDiscrepancyBudgetError",
    "StarDiscrepancyResult",
    "haar_coefficient",
    "haar_coefficients",
    "l2_norm_exact",
    "l2_squared_exact",
    "lemma1_rfunction",
    "partial_parseval",
    "star_discrepancy_exact",
    "SampledEstimate",
    "default_resolution",
    "evaluation_levels",
    "finest_gap",
    "lp_norm_sampled",
    "orlicz_norm_sampled",
    "sample_discrepancy",
    "superlevel_measure",
]
