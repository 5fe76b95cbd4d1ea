"""The PointSet type and its errors

:Module: starlab.point_sets.point_set
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

MAX_POINT_COORDINATES = 2**26


class PointSetError(ValueError):
    """Base error for malformed point sets."""


class _LineError(PointSetError):
    """A point-set file error that knows the offending line."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PointSetParseError(_LineError):
    """Raised when a line of a point-set file is not a list of decimal numbers."""


class DimensionInconsistencyError(_LineError):
    """Raised when a line has a different number of coordinates than the first one."""


class CoordinateOutOfRangeError(_LineError):
    """Raised when a coordinate is outside of [0,1)."""


class PointSetSizeError(PointSetError):
    """Raised when a requested point set is over the size guard."""


@dataclass(frozen=True, eq=False)
class PointSet:
    """N points in [0,1)^d, stored as an (N, d) float array. The label names the set in result records."""

    points: np.ndarray
    label: str = "points"

    def __post_init__(self):
        points = np.array(self.points, dtype=float, ndmin=2)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise PointSetError(f"A point set needs N >= 1 points of dimension d >= 1, got an array of shape {points.shape}")
        if points.size > MAX_POINT_COORDINATES:
            raise PointSetSizeError(f"{points.shape[0]} points in dimension {points.shape[1]} is over the limit of {MAX_POINT_COORDINATES} coordinates")
        if not np.all((points >= 0.0) & (points < 1.0)):
            raise CoordinateOutOfRangeError("Every coordinate must be in [0,1)")
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @property
    def n_points(self) -> int:
        """N"""
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        """d"""
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n_points

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.array_equal(self.points, other.points))

    def __hash__(self) -> int:
        return hash((self.points.shape, self.points.tobytes()))

    def as_sorted(self) -> np.ndarray:
        """The points in lexicographic order (for order-independent comparisons)."""
        return self.points[np.lexsort(self.points.T[::-1])]
