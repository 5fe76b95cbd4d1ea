"""Littlewood-Paley square functions

For a one-parameter Haar series f = sum alpha_I h_I (L-infinity normalized), the square function is
S(f)^2 = sum |alpha_I|^2 chi_I. Coefficients may be vectors, in which case |alpha_I| is the Euclidean norm.

Along one axis of a hyperbolic sum the same object is the sum over levels l of f_l^2, where f_l collects the rectangles whose side
on that axis has level l: at a fixed point only one interval per level contains the coordinate and h_I^2 = chi_I.

:Module: starlab.hyperbolic.square
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

from starlab.dyadic import DimensionMismatchError, DyadicInterval, GridFunction, check_grid_budget
from starlab.hyperbolic.expansion import HaarExpansion, InvalidExpansionError, axis_maps, hyperbolic_levels, shape_layer
from starlab.hyperbolic.norms import lp_norm
from starlab.utils.logging import LOGGER

Coefficient = Union[float, Sequence[float]]


def _series_level(series: Mapping[DyadicInterval, Coefficient], level: Optional[int]) -> int:
    finest = max((interval.level for interval in series), default=-1) + 1
    if level is None:
        return max(finest, 1)
    if level < finest:
        raise InvalidExpansionError(f"Level {level} is too coarse for a series with intervals down to level {finest - 1}")
    return level


def square_function(series: Mapping[DyadicInterval, Coefficient], level: Optional[int] = None) -> GridFunction:
    """S(f) = (sum over I of |alpha_I|^2 chi_I)^(1/2) on the one-dimensional grid (default: one level below the finest interval)."""
    level = _series_level(series, level)
    check_grid_budget((level,))

    squares = np.zeros(2**level, dtype=float)
    for interval, coefficient in series.items():
        weight = float(np.sum(np.square(np.atleast_1d(np.asarray(coefficient, dtype=float)))))
        width = 2 ** (level - interval.level)
        squares[interval.position * width : (interval.position + 1) * width] += weight

    return GridFunction((level,), np.sqrt(squares))


def series_to_grid(series: Mapping[DyadicInterval, float], level: Optional[int] = None) -> GridFunction:
    """Exact values of a scalar one-parameter Haar series."""
    level = _series_level(series, level)
    check_grid_budget((level,))

    values = np.zeros(2**level, dtype=float)
    for interval, coefficient in series.items():
        if np.ndim(coefficient):
            raise InvalidExpansionError("Only scalar series can be evaluated pointwise")
        positions, signs = axis_maps(interval.level, level)
        values += np.where(positions == interval.position, signs, 0) * float(coefficient)

    return GridFunction((level,), values)


def directional_square_function(expansion: HaarExpansion, axis: int) -> GridFunction:
    """The square function of a hyperbolic sum taken in the direction of one axis, on the (n+1)-grid."""
    if not 0 <= axis < expansion.d:
        raise DimensionMismatchError(f"Axis {axis} in a {expansion.d}-dimensional expansion")

    levels = hyperbolic_levels(expansion.n, expansion.d)
    check_grid_budget(levels)

    by_level: Dict[int, np.ndarray] = {}
    for shape in expansion.coarse_shapes + expansion.shapes:
        coefficients = expansion.coefficients(shape)
        if not np.any(coefficients):
            continue
        level = shape.entries[axis]
        layer = shape_layer(shape, coefficients, levels).astype(float)
        by_level[level] = by_level[level] + layer if level in by_level else layer

    squares = np.zeros(tuple(2**level for level in levels), dtype=float)
    for level in sorted(by_level):
        squares += np.square(by_level[level])

    return GridFunction(levels, np.sqrt(squares))


def random_haar_series(max_level: int, rng: np.random.Generator, gaussian: bool = True) -> Dict[DyadicInterval, float]:
    """A one-parameter series with a coefficient on every interval of level <= max_level (normal or +-1)."""
    series = {}
    for level in range(max_level + 1):
        count = 2**level
        coefficients = rng.standard_normal(count) if gaussian else rng.choice((-1.0, 1.0), size=count)
        for position, coefficient in enumerate(coefficients):
            series[DyadicInterval(level, position)] = float(coefficient)
    return series


class LittlewoodPaleyRow(NamedTuple):
    """||f||_p / (sqrt(p) ||S(f)||_p) for one series and one exponent."""

    series_index: int
    p: float
    ratio: float


@dataclass
class LittlewoodPaleyProbe:
    """The constant C in ||f||_p <= C sqrt(p) ||S(f)||_p fitted over a family of series."""

    rows: List[LittlewoodPaleyRow]

    @property
    def constant(self) -> float:
        """The smallest C consistent with every row."""
        return max(row.ratio for row in self.rows)


def littlewood_paley_probe(series_family: Sequence[Mapping[DyadicInterval, float]], ladder: Sequence[float] = (2, 4, 8, 16, 32)) -> LittlewoodPaleyProbe:
    """Fits C over every series of the family and every exponent of the ladder."""
    rows = []
    for index, series in enumerate(series_family):
        level = _series_level(series, None)
        values = series_to_grid(series, level)
        square = square_function(series, level)
        for p in ladder:
            denominator = math.sqrt(p) * lp_norm(square, p)
            if denominator == 0.0:
                continue
            rows.append(LittlewoodPaleyRow(index, float(p), lp_norm(values, p) / denominator))

    if not rows:
        raise InvalidExpansionError("Every series of the family is zero")

    probe = LittlewoodPaleyProbe(rows)
    LOGGER.debug(f"[📐] Littlewood-Paley constant over {len(series_family)} series: {probe.constant:.6g}")
    return probe
