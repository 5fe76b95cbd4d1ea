"""Exact discrepancy norms and Haar coefficients

:Module: starlab.discrepancy.exact
"""
import math
from typing import NamedTuple, Tuple

import numpy as np

from starlab.discrepancy.field import DiscrepancyField, critical_grid, exclusive_cumsum, inclusive_cumsum
from starlab.dyadic import DimensionMismatchError, DyadicRectangle, ShapeVector
from starlab.hyperbolic import RFunction
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER

PAIR_BLOCK_ENTRIES = 2**22


class StarDiscrepancyBudgetError(Exception):
    """Raised when the critical grid of the exact star discrepancy is over the StarDiscrepancyCellBudget."""


class PairBudgetError(Exception):
    """Raised when N^2 * d is over the PairBudget of the pairwise L2 closed form."""


class StarDiscrepancyResult(NamedTuple):
    """sup |D_N| over the closed cube, with the corner that attains it and which one-sided count (closed or open) did."""

    value: float
    witness: Tuple[float, ...]
    closed: bool


def star_discrepancy_exact(field: DiscrepancyField) -> StarDiscrepancyResult:
    """The L-infinity norm of D_N, with D_N extended by its one-sided limits.

    On the critical grid G = prod_j ({p_j} u {1}) the supremum is the larger of max(C - N V) and max(N V - O), where C counts the
    points in the closed box [0,g], O in the open box [0,g) and V is the volume of the box. The grid is swept one slice of the first
    axis at a time.
    """
    grid = critical_grid(field)
    points = field.points

    # A dummy axis turns the one-dimensional case into the general one: its only grid value is 1 and every point sits at 0 on it.
    if field.dimension == 1:
        grid = grid + (np.array([1.0]),)
        points = np.column_stack((points, np.zeros(field.n_points)))

    sizes = tuple(axis.size for axis in grid)
    cells = int(np.prod(sizes, dtype=float))
    budget = STARLAB_CONFIGURATION.settings["star_discrepancy_cell_budget"]
    if cells > budget:
        raise StarDiscrepancyBudgetError(
            f"[💥] The critical grid has {cells} corners, over the StarDiscrepancyCellBudget of {budget}. "
            "Use the sampled lower bound instead (lp_norm_sampled with a large p, or the `disc --norm sup --sampled` command)."
        )

    LOGGER.debug(f"[🔍] Sweeping the {sizes} critical grid of {field!r}...")
    ranks = np.column_stack([np.searchsorted(axis, points[:, index]) for index, axis in enumerate(grid)])
    order = np.argsort(ranks[:, 0], kind="stable")
    ranks = ranks[order]
    boundaries = np.searchsorted(ranks[:, 0], np.arange(sizes[0] + 1))

    other_axes = tuple(range(len(sizes) - 1))
    inner_volume = np.ones(sizes[1:])
    for index, axis in enumerate(grid[1:]):
        shape = [1] * (len(sizes) - 1)
        shape[index] = axis.size
        inner_volume = inner_volume * axis.reshape(shape)

    closed_running = np.zeros(sizes[1:], dtype=np.int64)
    open_running = np.zeros(sizes[1:], dtype=np.int64)
    best = (-math.inf, (0,) * len(sizes), True)
    n_points = field.n_points

    for first in range(sizes[0]):
        histogram = np.zeros(sizes[1:], dtype=np.int64)
        block = ranks[boundaries[first] : boundaries[first + 1], 1:]
        np.add.at(histogram, tuple(block.T), 1)

        # Open counts at this slice use strictly smaller first-axis ranks, so they are taken before this slice is added:
        open_counts = open_running
        closed_running = closed_running + inclusive_cumsum(histogram, other_axes)
        open_running = open_running + exclusive_cumsum(histogram, other_axes)

        volume = n_points * grid[0][first] * inner_volume
        closed_excess = closed_running - volume
        open_deficit = volume - open_counts

        for values, closed in ((closed_excess, True), (open_deficit, False)):
            index = int(np.argmax(values))
            if values.flat[index] > best[0]:
                best = (float(values.flat[index]), (first,) + np.unravel_index(index, sizes[1:]), closed)

    value, corner, closed = best
    witness = tuple(float(axis[position]) for axis, position in zip(grid, corner))[: field.dimension]
    return StarDiscrepancyResult(value, witness, closed)


def l2_squared_exact(field: DiscrepancyField) -> float:
    """The integral of D_N^2 over the cube from the pairwise closed form.

    sum_{p,q} prod_j (1 - max(p_j, q_j)) - 2N sum_p prod_j (1 - p_j^2)/2 + N^2 3^-d. Pairs are summed in row blocks of a fixed
    size, so the result does not depend on anything but the points.
    """
    n_points, d = field.n_points, field.dimension
    budget = STARLAB_CONFIGURATION.settings["pair_budget"]
    if n_points * n_points * d > budget:
        raise PairBudgetError(f"[💥] N^2 d = {n_points * n_points * d} is over the PairBudget of {budget}. Use lp_norm_sampled with p=2 instead.")

    points = field.points
    block = max(1, PAIR_BLOCK_ENTRIES // (n_points * d))
    pair_sum = 0.0
    for start in range(0, n_points, block):
        chunk = points[start : start + block]
        pair_sum += float(np.sum(np.prod(1.0 - np.maximum(chunk[:, None, :], points[None, :, :]), axis=2)))

    single_sum = float(np.sum(np.prod((1.0 - points**2) / 2.0, axis=1)))
    return pair_sum - 2.0 * n_points * single_sum + n_points**2 * 3.0**-d


def l2_norm_exact(field: DiscrepancyField) -> float:
    """||D_N||_2 (rounding below zero is clamped)."""
    return math.sqrt(max(l2_squared_exact(field), 0.0))


def _haar_primitive(coordinates: np.ndarray, left: np.ndarray, length: np.ndarray) -> np.ndarray:
    """A(t, I) = integral over x > t of h_I(x) dx = max(0, |I|/2 - |t - mid(I)|)."""
    return np.maximum(0.0, length / 2.0 - np.abs(coordinates - (left + length / 2.0)))


def haar_coefficient(field: DiscrepancyField, rect: DyadicRectangle) -> float:
    """<D_N, h_R> = sum_p prod_j A(p_j, R_j) - N prod_j |R_j|^2 / 4."""
    if rect.dimension != field.dimension:
        raise DimensionMismatchError(f"A {rect.dimension}-dimensional rectangle against a {field.dimension}-dimensional point set")

    counting = np.ones(field.n_points)
    for axis, side in enumerate(rect.sides):
        counting = counting * _haar_primitive(field.points[:, axis], side.left, side.length)

    linear = field.n_points * math.prod(side.length**2 / 4.0 for side in rect.sides)
    return float(np.sum(counting)) - linear


def haar_coefficients(field: DiscrepancyField, shape: ShapeVector) -> np.ndarray:
    """<D_N, h_R> for every R in D_r, as an array indexed by position vector.

    Only the rectangle that contains a point (in each coordinate) can see it, so every point contributes to one entry.
    """
    if shape.dimension != field.dimension:
        raise DimensionMismatchError(f"Shape {shape.entries} against a {field.dimension}-dimensional point set")

    positions = []
    weights = np.ones(field.n_points)
    for axis, level in enumerate(shape.entries):
        coordinates = field.points[:, axis]
        position = np.floor(coordinates * 2**level).astype(np.int64)
        length = 2.0**-level
        weights = weights * _haar_primitive(coordinates, position * length, length)
        positions.append(position)

    coefficients = np.zeros(shape.grid_shape, dtype=float)
    np.add.at(coefficients, tuple(positions), weights)

    linear = field.n_points * math.prod((2.0**-level) ** 2 / 4.0 for level in shape.entries)
    return coefficients - linear


class SignOptimalRFunction(NamedTuple):
    """The sign-optimal r-function and its pairing with D_N."""

    rfunction: RFunction
    pairing: float
    coefficients: np.ndarray


def lemma1_rfunction(field: DiscrepancyField, shape: ShapeVector) -> SignOptimalRFunction:
    """f_r with eps_R = sgn <D_N, h_R> (zero coefficients take +1), so that <D_N, f_r> = sum over R of |<D_N, h_R>|."""
    coefficients = haar_coefficients(field, shape)
    rfunction = RFunction.from_coefficients(shape, coefficients, zero_sign=1)
    return SignOptimalRFunction(rfunction, float(np.sum(np.abs(coefficients))), coefficients)


def partial_parseval(field: DiscrepancyField, max_level: int) -> float:
    """sum over all R with |r| <= max_level of <D_N, h_R>^2 / |R|.

    Nondecreasing in max_level and never above ||D_N - mean||_2^2 (the h_R / sqrt|R| are orthonormal).
    """
    total = 0.0
    for shape in ShapeVector.all_up_to_order(max_level, field.dimension):
        coefficients = haar_coefficients(field, shape)
        total += float(np.sum(coefficients**2)) * shape.cardinality
    return total
