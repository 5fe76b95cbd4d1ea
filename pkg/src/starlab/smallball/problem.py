"""Signed hyperbolic sums as a search problem

The unknowns are the coefficients eps_R of the M = count_rectangles(n, d) rectangles of volume 2^-n, in rectangle-enumeration order;
the objective is the sup norm of sum eps_R h_R on the (n+1)-grid. Every rectangle covers the same number of cells (the cube volume
over 2^n cells of the grid), so the coverage is kept as two (M, K) arrays: the flat cell indices of each rectangle and the values of
h_R on them.

:Module: starlab.smallball.problem
"""
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional

import numpy as np

from starlab.dyadic import ShapeVector, check_grid_budget
from starlab.hyperbolic import count_rectangles, hyperbolic_levels
from starlab.hyperbolic.expansion import axis_maps

SEARCH_METHODS = ("exhaustive", "branch_and_bound", "local_search", "monte_carlo")


class SearchBudgetError(Exception):
    """Raised when a search is over its budget (exhaustive search directs to branch_and_bound)."""


class SignedSum:
    """Coverage tables of the rectangles of volume 2^-n in [0,1)^d and fast evaluation of sum eps_R h_R."""

    def __init__(self, n: int, d: int):
        self.n = n
        self.d = d
        self.shapes = ShapeVector.all_of_order(n, d)
        self.rectangle_count = count_rectangles(n, d)
        self.levels = hyperbolic_levels(n, d)
        check_grid_budget(self.levels)
        self.cell_count = 2 ** sum(self.levels)

        cover = []
        pattern = []
        for shape in self.shapes:
            shape_cover, shape_pattern = self._shape_coverage(shape)
            cover.append(shape_cover)
            pattern.append(shape_pattern)
        self.cover = np.concatenate(cover)
        self.pattern = np.concatenate(pattern)

    def _shape_coverage(self, shape: ShapeVector):
        """Cell indices and Haar values of every rectangle of the shape, rows in position row-major order."""
        grid_shape = tuple(2**level for level in self.levels)
        positions = []
        signs = np.int8(1)
        for axis, (entry, level) in enumerate(zip(shape.entries, self.levels)):
            axis_positions, axis_signs = axis_maps(entry, level)
            broadcast = [1] * self.d
            broadcast[axis] = axis_positions.size
            positions.append(axis_positions.reshape(broadcast))
            signs = signs * axis_signs.reshape(broadcast)

        rectangle = np.ravel_multi_index(tuple(np.broadcast_arrays(*positions)), shape.grid_shape).ravel()
        cells = np.arange(self.cell_count)
        signs = np.broadcast_to(signs, grid_shape).ravel()

        order = np.argsort(rectangle, kind="stable")
        per_rectangle = self.cell_count // shape.cardinality
        return cells[order].reshape(shape.cardinality, per_rectangle), signs[order].reshape(shape.cardinality, per_rectangle)

    @property
    def shape_count(self) -> int:
        """Number of shapes; every cell is covered by exactly this many rectangles."""
        return len(self.shapes)

    @property
    def cells_per_rectangle(self) -> int:
        """K"""
        return self.cover.shape[1]

    def evaluate(self, coefficients: np.ndarray) -> np.ndarray:
        """Flat cell values of sum alpha_R h_R."""
        coefficients = np.asarray(coefficients)
        weights = (coefficients[:, None] * self.pattern).ravel()
        values = np.bincount(self.cover.ravel(), weights=weights, minlength=self.cell_count)
        return np.rint(values).astype(np.int64) if np.issubdtype(coefficients.dtype, np.integer) else values

    def sup_norm(self, coefficients: np.ndarray) -> float:
        """sup |sum alpha_R h_R|"""
        return float(np.abs(self.evaluate(coefficients)).max())

    @cached_property
    def dense_matrix(self) -> np.ndarray:
        """The (cells, M) matrix of h_R values, for exhaustive enumeration."""
        matrix = np.zeros((self.cell_count, self.rectangle_count), dtype=np.int32)
        for index in range(self.rectangle_count):
            matrix[self.cover[index], index] = self.pattern[index]
        return matrix


def l2_floor(n: int, d: int) -> int:
    """Lower bound from ||F||_inf >= ||F||_2 = sqrt(#shapes) for +-1 signs.

    Cell values are sums of #shapes terms +-1, so they share its parity; the bound is the smallest integer of that parity at or above the
    square root.
    """
    shapes = len(ShapeVector.all_of_order(n, d))
    bound = math.isqrt(shapes - 1) + 1 if shapes > 0 else 0
    if bound % 2 != shapes % 2:
        bound += 1
    return bound


def certified_lower_bound(n: int, d: int) -> int:
    """The best lower bound known without search: the L2 floor, and in the plane the Riesz product bound n + 1."""
    floor = l2_floor(n, d)
    return max(floor, n + 1) if d == 2 else floor


def encode_signs(signs: np.ndarray) -> str:
    """Bitstring in rectangle-enumeration order: 1 for +1, 0 for -1 (and 0 for a zero coefficient)."""
    return "".join("1" if sign > 0 else "0" for sign in np.asarray(signs).ravel())


def decode_signs(bits: str) -> np.ndarray:
    """Inverse of `encode_signs` for +-1 assignments."""
    return np.array([1 if bit == "1" else -1 for bit in bits.strip()], dtype=np.int8)


@dataclass
class SearchResult:
    """The outcome of a small-ball search or estimate.

    status is `proved` for a certified minimum, `incumbent` for the best assignment found by an interrupted exact search,
    `upper_bound` for local search and `estimate` for Monte Carlo.
    """

    n: int
    d: int
    method: str
    value: float
    status: str
    certificate: Optional[float] = None
    assignment: Optional[np.ndarray] = field(default=None, repr=False)
    evaluations: int = 0
    seed: Optional[int] = None
    stderr: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def proved(self) -> bool:
        """The value is a true minimum."""
        return self.status == "proved"

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record; the assignment is a bitstring in rectangle-enumeration order."""
        record = {
            "n": self.n,
            "d": self.d,
            "method": self.method,
            "value": self.value,
            "status": self.status,
            "proved": self.proved,
            "certificate": self.certificate,
            "assignment": encode_signs(self.assignment) if self.assignment is not None else None,
            "evaluations": self.evaluations,
            "seed": self.seed,
        }
        if self.stderr is not None:
            record["stderr"] = self.stderr
        record.update(self.extra)
        return record
