"""Dyadic intervals, rectangles and shape vectors

A dyadic interval is [k 2^-j, (k+1) 2^-j), always half-open, so that every x in [0,1) lies in exactly one interval per level.
Rectangles are d-fold products of dyadic intervals; a shape vector r fixes the side lengths 2^-r_j, and the rectangles of
one shape partition the unit cube.

:Module: starlab.dyadic.intervals
"""
from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple


class DyadicDomainError(ValueError):
    """Raised when a point or index lies outside the dyadic domain [0,1)."""


class DimensionMismatchError(ValueError):
    """Raised when objects of different dimension are combined."""


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The interval [position * 2^-level, (position + 1) * 2^-level)."""

    level: int
    position: int

    def __post_init__(self):
        if self.level < 0:
            raise DyadicDomainError(f"Dyadic level must be nonnegative, got {self.level}")
        if not 0 <= self.position < 2**self.level:
            raise DyadicDomainError(f"Dyadic position {self.position} is out of range for level {self.level}")

    @property
    def length(self) -> float:
        """|I| = 2^-level"""
        return 2.0**-self.level

    @property
    def left(self) -> float:
        """Left (closed) endpoint."""
        return self.position * self.length

    @property
    def right(self) -> float:
        """Right (open) endpoint."""
        return (self.position + 1) * self.length

    @property
    def midpoint(self) -> float:
        """Where the Haar function changes sign."""
        return (self.position + 0.5) * self.length

    def contains(self, x: float) -> bool:
        """Half-open membership."""
        return self.left <= x < self.right

    def children(self) -> Tuple["DyadicInterval", "DyadicInterval"]:
        """The left and right halves."""
        return DyadicInterval(self.level + 1, 2 * self.position), DyadicInterval(self.level + 1, 2 * self.position + 1)

    def is_ancestor_of(self, other: "DyadicInterval") -> bool:
        """True when `other` is contained in this interval and strictly shorter."""
        return other.level > self.level and other.position >> (other.level - self.level) == self.position

    def intersection(self, other: "DyadicInterval") -> Optional["DyadicInterval"]:
        """Dyadic intervals are nested or disjoint: the intersection is the shorter one or nothing."""
        if self.level <= other.level:
            coarse, fine = self, other
        else:
            coarse, fine = other, self

        if fine.position >> (fine.level - coarse.level) == coarse.position:
            return fine

        return None

    @classmethod
    def containing(cls, x: float, level: int) -> "DyadicInterval":
        """The unique interval of the given level that contains x."""
        if not 0.0 <= x < 1.0:
            raise DyadicDomainError(f"Point {x} is outside of [0,1)")
        return cls(level, int(x * 2**level))


@dataclass(frozen=True, order=True)
class ShapeVector:
    """The shape r = (r_1, ..., r_d) of the rectangles with side lengths 2^-r_j. The order is |r| = sum(r)."""

    entries: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(entry) for entry in self.entries))
        if not self.entries:
            raise DimensionMismatchError("A shape vector needs at least one entry")
        if any(entry < 0 for entry in self.entries):
            raise DyadicDomainError(f"Shape entries must be nonnegative: {self.entries}")

    @property
    def dimension(self) -> int:
        """d"""
        return len(self.entries)

    @property
    def order(self) -> int:
        """|r|"""
        return sum(self.entries)

    @property
    def cardinality(self) -> int:
        """Number of rectangles in the partition D_r, equal to 2^|r|."""
        return 2**self.order

    @property
    def grid_shape(self) -> Tuple[int, ...]:
        """Array shape of per-rectangle data, indexed by position vector (row-major in axis order)."""
        return tuple(2**entry for entry in self.entries)

    def rectangle(self, position: Sequence[int]) -> "DyadicRectangle":
        """The rectangle of this shape at the given position vector."""
        if len(position) != self.dimension:
            raise DimensionMismatchError(f"Position {tuple(position)} does not match shape dimension {self.dimension}")
        return DyadicRectangle(tuple(DyadicInterval(level, pos) for level, pos in zip(self.entries, position)))

    def positions(self) -> Iterator[Tuple[int, ...]]:
        """Position vectors in row-major order."""
        return product(*(range(2**entry) for entry in self.entries))

    def rectangles(self) -> Iterator["DyadicRectangle"]:
        """All rectangles of D_r, row-major in position."""
        for position in self.positions():
            yield self.rectangle(position)

    @staticmethod
    def all_of_order(n: int, d: int) -> List["ShapeVector"]:
        """All shapes with |r| = n in dimension d, sorted lexicographically."""
        if n < 0 or d < 1:
            raise DyadicDomainError(f"Need n >= 0 and d >= 1, got n={n}, d={d}")
        return [ShapeVector(entries) for entries in _compositions(n, d)]

    @staticmethod
    def all_up_to_order(n: int, d: int) -> List["ShapeVector"]:
        """All shapes with |r| <= n (for sums over |R| >= 2^-n), sorted by order and then lexicographically."""
        shapes = []
        for order in range(n + 1):
            shapes.extend(ShapeVector.all_of_order(order, d))
        return shapes


def _compositions(n: int, d: int) -> Iterator[Tuple[int, ...]]:
    """Weak compositions of n into d parts, in lexicographic order."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


@dataclass(frozen=True, order=True)
class DyadicRectangle:
    """A product of d dyadic intervals."""

    sides: Tuple[DyadicInterval, ...]

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(self.sides))
        if not self.sides:
            raise DimensionMismatchError("A dyadic rectangle needs at least one side")

    @classmethod
    def from_levels(cls, levels: Sequence[int], positions: Sequence[int]) -> "DyadicRectangle":
        """Convenience constructor from parallel level and position vectors."""
        if len(levels) != len(positions):
            raise DimensionMismatchError(f"Got {len(levels)} levels but {len(positions)} positions")
        return cls(tuple(DyadicInterval(level, position) for level, position in zip(levels, positions)))

    @property
    def dimension(self) -> int:
        """d"""
        return len(self.sides)

    @property
    def shape(self) -> ShapeVector:
        """The shape vector of side levels."""
        return ShapeVector(tuple(side.level for side in self.sides))

    @property
    def position(self) -> Tuple[int, ...]:
        """The position vector."""
        return tuple(side.position for side in self.sides)

    @property
    def volume(self) -> float:
        """|R| = 2^-(sum of levels)"""
        return 2.0 ** -self.shape.order

    def contains(self, x: Sequence[float]) -> bool:
        """Half-open membership in every coordinate."""
        if len(x) != self.dimension:
            raise DimensionMismatchError(f"Point of dimension {len(x)} against a rectangle of dimension {self.dimension}")
        return all(side.contains(coordinate) for side, coordinate in zip(self.sides, x))

    def intersection(self, other: "DyadicRectangle") -> Optional["DyadicRectangle"]:
        """The intersection rectangle, or None when the two are disjoint."""
        if other.dimension != self.dimension:
            raise DimensionMismatchError(f"Rectangles of dimension {self.dimension} and {other.dimension}")
        sides = []
        for mine, theirs in zip(self.sides, other.sides):
            side = mine.intersection(theirs)
            if side is None:
                return None
            sides.append(side)
        return DyadicRectangle(tuple(sides))

    def is_disjoint(self, other: "DyadicRectangle") -> bool:
        """True when the rectangles do not overlap."""
        return self.intersection(other) is None

    def __str__(self) -> str:
        return " x ".join(f"[{side.left:g},{side.right:g})" for side in self.sides)
