"""Haar functions with the L-infinity normalization

h_I is -1 on the left half of I, +1 on the right half, and 0 outside. In d dimensions h_R is the tensor product of the
per-axis functions. The two-dimensional product rule lives here too: the product of two distinct Haar functions of the
same volume that meet is, up to sign, the Haar function of their intersection.

:Module: starlab.dyadic.haar
"""
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from starlab.dyadic.intervals import DimensionMismatchError, DyadicDomainError, DyadicInterval, DyadicRectangle


class NotApplicableType:
    """Sentinel for a product of Haar functions that is not itself a signed Haar function."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NotApplicable"

    def __bool__(self) -> bool:
        return False


NotApplicable = NotApplicableType()


class SignedRectangle(NamedTuple):
    """sign * h_rect"""

    sign: int
    rect: DyadicRectangle


def haar_eval(interval: DyadicInterval, x: float) -> int:
    """Evaluates h_I(x) for x in [0,1)."""
    if not 0.0 <= x < 1.0:
        raise DyadicDomainError(f"Haar functions are evaluated on [0,1); got {x}")

    if not interval.contains(x):
        return 0

    return -1 if x < interval.midpoint else 1


def haar_eval_rect(rect: DyadicRectangle, x: Sequence[float]) -> int:
    """Evaluates h_R(x) as the product of the per-axis values."""
    if len(x) != rect.dimension:
        raise DimensionMismatchError(f"Point of dimension {len(x)} against a rectangle of dimension {rect.dimension}")

    value = 1
    for side, coordinate in zip(rect.sides, x):
        value *= haar_eval(side, coordinate)
        if not value:
            return 0

    return value


def haar_values(interval: DyadicInterval, x: np.ndarray) -> np.ndarray:
    """Vectorized h_I on an array of coordinates in [0,1). Returns int8 values in {-1, 0, 1}."""
    x = np.asarray(x, dtype=float)
    inside = (x >= interval.left) & (x < interval.right)
    return np.where(inside, np.where(x < interval.midpoint, -1, 1), 0).astype(np.int8)


def haar_function(rect: DyadicRectangle) -> Callable[..., np.ndarray]:
    """Returns h_R as an exact-evaluable function: it takes one broadcastable coordinate array per axis."""

    def evaluate(*coordinates: np.ndarray) -> np.ndarray:
        if len(coordinates) != rect.dimension:
            raise DimensionMismatchError(f"Expected {rect.dimension} coordinate arrays, got {len(coordinates)}")
        value = np.int8(1)
        for side, axis_values in zip(rect.sides, coordinates):
            value = value * haar_values(side, axis_values)
        return value

    return evaluate


def haar_sign_on(outer: DyadicInterval, inner: DyadicInterval) -> int:
    """The constant value of h_outer on a strictly smaller interval inside it."""
    if not outer.is_ancestor_of(inner):
        raise DyadicDomainError(f"{inner} is not strictly inside {outer}")
    return -1 if inner.left < outer.midpoint else 1


def product_rule(first: DyadicRectangle, second: DyadicRectangle) -> Union[SignedRectangle, NotApplicableType]:
    """h_R * h_R' = sign * h_{R cap R'} for distinct, intersecting rectangles of equal volume whose side lengths differ in every coordinate.

    In d = 2 the last condition is automatic for distinct rectangles of the same volume. In d >= 3 two boxes of the same volume
    can share a side length, and the product is then not a Haar function: NotApplicable is returned.
    """
    if first.dimension != second.dimension or first == second:
        return NotApplicable

    if first.shape.order != second.shape.order:
        return NotApplicable

    sign = 1
    sides = []
    for mine, theirs in zip(first.sides, second.sides):
        if mine.level == theirs.level:
            return NotApplicable

        coarse, fine = (mine, theirs) if mine.level < theirs.level else (theirs, mine)
        if not coarse.is_ancestor_of(fine):
            return NotApplicable  # disjoint: the product vanishes

        sign *= haar_sign_on(coarse, fine)
        sides.append(fine)

    return SignedRectangle(sign, DyadicRectangle(tuple(sides)))
