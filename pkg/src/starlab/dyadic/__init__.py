"""Dyadic intervals, rectangles, Haar functions and the exact grid representation that every other module builds on.

:Module: starlab.dyadic
"""
from starlab.dyadic.intervals import DimensionMismatchError, DyadicDomainError, DyadicInterval, DyadicRectangle, ShapeVector
from starlab.dyadic.haar import NotApplicable, SignedRectangle, haar_eval, haar_eval_rect, haar_function, haar_values, product_rule
from starlab.dyadic.grid import (
    GridBudgetExceededError,
    GridFunction,
    GridMismatchError,
    NotPiecewiseConstantError,
    cell_centers,
    check_grid_budget,
    grid_haar_coefficients,
    to_grid,
)

__all__ = [
    "DimensionMismatchError",
    "DyadicDomainError",
    "DyadicInterval",
    "DyadicRectangle",
    "ShapeVector",
    "NotApplicable",
    "SignedRectangle",
    "haar_eval",
    "haar_eval_rect",
    "haar_function",
    "haar_values",
    "product_rule",
    "GridBudgetExceededError",
    "GridFunction",
    "GridMismatchError",
    "NotPiecewiseConstantError",
    "cell_centers",
    "check_grid_budget",
    "grid_haar_coefficients",
    "to_grid",
]
