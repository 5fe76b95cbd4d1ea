"""Exact piecewise-constant functions on dyadic grids

A GridFunction with levels m = (m_1, ..., m_d) holds one value per cell of the grid with 2^m_j cells along axis j. Its integral is
2^-(sum m_j) times the sum of the values, and every exact norm in Starlab is built on that identity.

Exact-evaluable functions are plain callables that take one coordinate array per axis (already shaped for broadcasting over the
grid) and return the values at those coordinates. `haar_function` in `starlab.dyadic.haar` is one of them.

:Module: starlab.dyadic.grid
"""
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from starlab.dyadic.intervals import DimensionMismatchError, DyadicDomainError, ShapeVector
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER


class GridBudgetExceededError(Exception):
    """Raised when a requested grid resolution exceeds the configured GridBudgetBits."""


class GridMismatchError(ValueError):
    """Raised when two grid functions live on incompatible grids."""


class NotPiecewiseConstantError(ValueError):
    """Raised by the debug checks of `to_grid` when a function is not constant on the grid cells."""


def check_grid_budget(levels: Sequence[int]) -> None:
    """Raises GridBudgetExceededError when the sum of levels is over the configured budget."""
    budget = STARLAB_CONFIGURATION.settings["grid_budget_bits"]
    total = sum(levels)
    if total > budget:
        raise GridBudgetExceededError(
            f"[💥] A grid with levels {tuple(levels)} needs 2^{total} cells, over the budget of 2^{budget}. "
            "Reduce n, d or the resolution, or raise GridBudgetBits."
        )


def cell_centers(levels: Sequence[int]) -> Tuple[np.ndarray, ...]:
    """Per-axis cell centers, each shaped to broadcast along its own axis."""
    d = len(levels)
    centers = []
    for axis, level in enumerate(levels):
        shape = [1] * d
        shape[axis] = 2**level
        centers.append(((np.arange(2**level) + 0.5) / 2**level).reshape(shape))
    return tuple(centers)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values of a piecewise-constant function on the dyadic grid with the given per-axis levels."""

    levels: Tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(level) for level in self.levels))
        values = np.asarray(self.values)
        expected = tuple(2**level for level in self.levels)
        if values.shape != expected:
            raise GridMismatchError(f"Values of shape {values.shape} do not match levels {self.levels} (expected {expected})")
        if values.dtype.kind == "f" and not np.all(np.isfinite(values)):
            raise ValueError("Grid values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, levels: Sequence[int], dtype=float) -> "GridFunction":
        """The zero function."""
        check_grid_budget(levels)
        return cls(tuple(levels), np.zeros(tuple(2**level for level in levels), dtype=dtype))

    @classmethod
    def constant(cls, levels: Sequence[int], value: float) -> "GridFunction":
        """The constant function."""
        check_grid_budget(levels)
        return cls(tuple(levels), np.full(tuple(2**level for level in levels), value, dtype=float))

    @property
    def dimension(self) -> int:
        """d"""
        return len(self.levels)

    @property
    def cell_volume(self) -> float:
        """2^-(sum m_j)"""
        return 2.0 ** -sum(self.levels)

    def integral(self) -> float:
        """Exact integral over the unit cube (pairwise summation as done by numpy)."""
        return float(np.sum(self.values, dtype=float)) * self.cell_volume

    def mean(self) -> float:
        """Same as the integral, the cube having unit volume."""
        return self.integral()

    def abs_max(self) -> float:
        """max over cells of |g|"""
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def refine(self, levels: Sequence[int]) -> "GridFunction":
        """Represents the same function on a finer grid."""
        levels = tuple(levels)
        if len(levels) != self.dimension:
            raise DimensionMismatchError(f"Cannot refine a {self.dimension}-d grid to levels {levels}")
        if any(new < old for new, old in zip(levels, self.levels)):
            raise GridMismatchError(f"Levels {levels} are coarser than {self.levels}")
        if levels == self.levels:
            return self

        check_grid_budget(levels)
        values = self.values
        for axis, (new, old) in enumerate(zip(levels, self.levels)):
            values = np.repeat(values, 2 ** (new - old), axis=axis)
        return GridFunction(levels, values)

    def common_levels(self, other: "GridFunction") -> Tuple[int, ...]:
        """The coarsest grid that both functions live on."""
        if other.dimension != self.dimension:
            raise DimensionMismatchError(f"Grid functions of dimension {self.dimension} and {other.dimension}")
        return tuple(max(mine, theirs) for mine, theirs in zip(self.levels, other.levels))

    def _aligned(self, other: "GridFunction") -> Tuple[np.ndarray, np.ndarray, Tuple[int, ...]]:
        levels = self.common_levels(other)
        return self.refine(levels).values, other.refine(levels).values, levels

    def inner(self, other: "GridFunction") -> float:
        """Exact <g, h> = integral of g * h."""
        mine, theirs, levels = self._aligned(other)
        return float(np.sum(mine.astype(float) * theirs, dtype=float)) * 2.0 ** -sum(levels)

    def __add__(self, other: "GridFunction") -> "GridFunction":
        mine, theirs, levels = self._aligned(other)
        return GridFunction(levels, mine + theirs)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        mine, theirs, levels = self._aligned(other)
        return GridFunction(levels, mine - theirs)

    def __mul__(self, other) -> "GridFunction":
        if isinstance(other, GridFunction):
            mine, theirs, levels = self._aligned(other)
            return GridFunction(levels, mine * theirs)
        return GridFunction(self.levels, self.values * other)

    __rmul__ = __mul__

    def map(self, func: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Applies a pointwise function to the values (exact, the function stays constant per cell)."""
        return GridFunction(self.levels, func(self.values))


def to_grid(func: Callable[..., np.ndarray], levels: Sequence[int], debug: Optional[bool] = None) -> GridFunction:
    """Evaluates an exact-evaluable function at the cell centers of the grid with the given levels.

    The caller asserts that `func` is constant on every cell. With `debug` (default: the DebugGridChecks setting) the function is
    also evaluated at two more points per cell, a quarter cell to each side of the center, and a mismatch raises
    NotPiecewiseConstantError.
    """
    levels = tuple(int(level) for level in levels)
    if any(level < 0 for level in levels):
        raise DyadicDomainError(f"Grid levels must be nonnegative: {levels}")
    check_grid_budget(levels)

    centers = cell_centers(levels)
    shape = tuple(2**level for level in levels)
    values = np.broadcast_to(np.asarray(func(*centers)), shape).copy()

    if debug is None:
        debug = STARLAB_CONFIGURATION.settings["debug_grid_checks"]

    if debug:
        LOGGER.debug(f"[🔬] Checking that the function is constant on the cells of the {levels} grid...")
        for offset in (-0.25, 0.25):
            shifted = tuple(center + offset / 2**level for center, level in zip(centers, levels))
            sampled = np.broadcast_to(np.asarray(func(*shifted)), shape)
            if not np.array_equal(sampled, values):
                raise NotPiecewiseConstantError(f"The function is not constant on the cells of the {levels} grid")

    return GridFunction(levels, values)


def grid_haar_coefficients(grid: GridFunction, shape: ShapeVector) -> np.ndarray:
    """Exact <g, h_R> for every R in D_r, as an array indexed by position vector.

    Needs m_j >= r_j + 1 on every axis so that the halves of each rectangle are unions of cells.
    """
    if shape.dimension != grid.dimension:
        raise DimensionMismatchError(f"Shape {shape.entries} against a {grid.dimension}-d grid")
    if any(level < entry + 1 for level, entry in zip(grid.levels, shape.entries)):
        raise GridMismatchError(f"The {grid.levels} grid is too coarse for the Haar functions of shape {shape.entries}")

    blocks = []
    for level, entry in zip(grid.levels, shape.entries):
        blocks.extend([2**entry, 2, 2 ** (level - entry - 1)])

    values = grid.values.astype(float).reshape(blocks)
    values = values.sum(axis=tuple(3 * axis + 2 for axis in range(grid.dimension)))

    # Right half minus left half, last axis first so the earlier axis positions stay put:
    for axis in reversed(range(grid.dimension)):
        values = np.take(values, 1, axis=2 * axis + 1) - np.take(values, 0, axis=2 * axis + 1)

    return values * grid.cell_volume
