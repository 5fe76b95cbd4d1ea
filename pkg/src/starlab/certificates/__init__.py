"""Test functions from the lower-bound arguments, each with an exact check of the identities it relies on.

:Module: starlab.certificates
"""
from starlab.certificates.roth import CertificateViolationError, ChainReport, chain_verify, halasz_scale, roth_dual
from starlab.certificates.riesz import (
    ClosureReport,
    HalaszReport,
    RieszCertificate,
    RieszProduct,
    RieszSupport,
    SineReport,
    duality_pair,
    factor_shapes,
    halasz_sine,
    linear_layer,
    product_grid,
    random_factor_signs,
    riesz_closure_check,
    riesz_factors,
    riesz_halasz,
    riesz_support,
    riesz_talagrand,
    talagrand_lower_bound,
)
from starlab.certificates.beck import (
    BeckGainReport,
    InvalidPatternError,
    PatternGrowth,
    PatternReport,
    beck_gain_sum,
    coincidence_pattern_sum,
    free_parameters,
    pattern_growth,
    sign_expansion,
    validate_pattern,
)

__all__ = [
    "CertificateViolationError",
    "ChainReport",
    "chain_verify",
    "halasz_scale",
    "roth_dual",
    "ClosureReport",
    "HalaszReport",
    "RieszCertificate",
    "RieszProduct",
    "RieszSupport",
    "SineReport",
    "duality_pair",
    "factor_shapes",
    "halasz_sine",
    "linear_layer",
    "product_grid",
    "random_factor_signs",
    "riesz_closure_check",
    "riesz_factors",
    "riesz_halasz",
    "riesz_support",
    "riesz_talagrand",
    "talagrand_lower_bound",
    "BeckGainReport",
    "InvalidPatternError",
    "PatternGrowth",
    "PatternReport",
    "beck_gain_sum",
    "coincidence_pattern_sum",
    "free_parameters",
    "pattern_growth",
    "sign_expansion",
    "validate_pattern",
]
