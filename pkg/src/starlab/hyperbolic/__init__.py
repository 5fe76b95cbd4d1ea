"""Hyperbolic Haar sums, r-functions and their norms.

:Module: starlab.hyperbolic
"""
from starlab.hyperbolic.expansion import (
    HaarExpansion,
    InvalidExpansionError,
    RFunction,
    RectangleCountOverflowError,
    count_rectangles,
    expansion_from_rfunctions,
    expansion_to_grid,
    hyperbolic_levels,
    rectangle_enumeration,
    rfunctions_of,
    shape_layer,
)
from starlab.hyperbolic.norms import (
    GrowthProbe,
    InvalidOrliczSpecError,
    OrliczSpec,
    lp_growth_probe,
    lp_ladder,
    lp_norm,
    orlicz_exp_via_lp,
    orlicz_norm,
    sup_norm,
)
from starlab.hyperbolic.square import (
    LittlewoodPaleyProbe,
    directional_square_function,
    littlewood_paley_probe,
    random_haar_series,
    series_to_grid,
    square_function,
)

__all__ = [
    "HaarExpansion",
    "InvalidExpansionError",
    "RFunction",
    "RectangleCountOverflowError",
    "count_rectangles",
    "expansion_from_rfunctions",
    "expansion_to_grid",
    "hyperbolic_levels",
    "rectangle_enumeration",
    "rfunctions_of",
    "shape_layer",
    "GrowthProbe",
    "InvalidOrliczSpecError",
    "OrliczSpec",
    "lp_growth_probe",
    "lp_ladder",
    "lp_norm",
    "orlicz_exp_via_lp",
    "orlicz_norm",
    "sup_norm",
    "LittlewoodPaleyProbe",
    "directional_square_function",
    "littlewood_paley_probe",
    "random_haar_series",
    "series_to_grid",
    "square_function",
]
