"""Hyperbolic Haar expansions and r-functions

A HaarExpansion at scale n in dimension d carries coefficients alpha_R on the rectangles of volume 2^-n (every shape with
|r| = n), plus an optional coarse part on the shapes with |r| < n. Coefficients are kept per shape, sparse (a position -> value
dictionary) until more than half of the shape is filled, dense (a numpy array indexed by position vector) after that.

Rectangles are enumerated in one canonical order everywhere: shapes lexicographically, then positions row-major. Sign vectors
and bitstrings follow that order.

:Module: starlab.hyperbolic.expansion
"""
import json
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb

from starlab.dyadic import DimensionMismatchError, DyadicRectangle, GridFunction, ShapeVector, check_grid_budget
from starlab.utils.logging import LOGGER

MAX_RECTANGLE_COUNT = 2**62
DENSE_FILL_RATIO = 0.5

ShapeCoefficients = Union[np.ndarray, Dict[Tuple[int, ...], float]]


class InvalidExpansionError(ValueError):
    """Raised when coefficients are keyed on shapes or positions that do not belong to the expansion."""


class RectangleCountOverflowError(OverflowError):
    """Raised when the number of rectangles does not fit the 64-bit indexing used for sign vectors."""


def count_rectangles(n: int, d: int) -> int:
    """Number of dyadic rectangles of volume 2^-n in [0,1)^d: C(n+d-1, d-1) * 2^n."""
    if n < 0 or d < 1:
        raise InvalidExpansionError(f"Need n >= 0 and d >= 1, got n={n}, d={d}")

    count = int(comb(n + d - 1, d - 1, exact=True)) * 2**n
    if count > MAX_RECTANGLE_COUNT:
        raise RectangleCountOverflowError(f"{count} rectangles at n={n}, d={d} is more than can be indexed")

    return count


def rectangle_enumeration(n: int, d: int) -> List[Tuple[ShapeVector, Tuple[int, ...]]]:
    """The canonical (shape, position) order of the rectangles with |R| = 2^-n."""
    count_rectangles(n, d)
    return [(shape, position) for shape in ShapeVector.all_of_order(n, d) for position in shape.positions()]


def hyperbolic_levels(n: int, d: int) -> Tuple[int, ...]:
    """The grid a scale-n hyperbolic sum is exact on: Haar functions with r_j <= n change sign at level r_j + 1 <= n + 1."""
    return (n + 1,) * d


def axis_maps(level: int, grid_level: int) -> Tuple[np.ndarray, np.ndarray]:
    """For a side of the given level on an axis with 2^grid_level cells: the interval position of each cell, and the Haar sign of each cell."""
    cells = np.arange(2**grid_level)
    positions = cells >> (grid_level - level)
    signs = (((cells >> (grid_level - level - 1)) & 1) * 2 - 1).astype(np.int8)
    return positions, signs


def shape_layer(shape: ShapeVector, coefficients: np.ndarray, levels: Sequence[int]) -> np.ndarray:
    """Exact values of sum over R in D_r of alpha_R h_R on the grid with the given levels (each level must exceed r_j)."""
    if any(level <= entry for level, entry in zip(levels, shape.entries)):
        raise InvalidExpansionError(f"The grid {tuple(levels)} is too coarse for shape {shape.entries}")

    index = []
    sign = np.int8(1)
    d = len(levels)
    for axis, (entry, level) in enumerate(zip(shape.entries, levels)):
        positions, signs = axis_maps(entry, level)
        index.append(positions)
        broadcast = [1] * d
        broadcast[axis] = signs.size
        sign = sign * signs.reshape(broadcast)

    return coefficients[np.ix_(*index)] * sign


class _ShapeStore:
    """Coefficient storage for one shape: sparse dictionary until it is more than half full, then a dense array."""

    def __init__(self, shape: ShapeVector):
        self.shape = shape
        self._sparse: Optional[Dict[Tuple[int, ...], float]] = {}
        self._dense: Optional[np.ndarray] = None

    @property
    def is_dense(self) -> bool:
        """True once the store holds a dense array."""
        return self._dense is not None

    def set_dense(self, values: np.ndarray) -> None:
        """Replaces the store with a dense array."""
        values = np.asarray(values)
        if values.shape != self.shape.grid_shape:
            raise InvalidExpansionError(f"Coefficient array of shape {values.shape} does not fit shape {self.shape.entries}")
        self._dense = values
        self._sparse = None

    def set(self, position: Tuple[int, ...], value: float) -> None:
        """Sets one coefficient."""
        if len(position) != self.shape.dimension or any(not 0 <= pos < size for pos, size in zip(position, self.shape.grid_shape)):
            raise InvalidExpansionError(f"Position {position} does not exist for shape {self.shape.entries}")

        if self._dense is not None:
            self._dense[position] = value
            return

        self._sparse[position] = value
        if len(self._sparse) > DENSE_FILL_RATIO * self.shape.cardinality:
            dense = np.zeros(self.shape.grid_shape, dtype=float)
            for key, stored in self._sparse.items():
                dense[key] = stored
            self.set_dense(dense)

    def array(self) -> np.ndarray:
        """Dense view of the coefficients."""
        if self._dense is not None:
            return self._dense
        dense = np.zeros(self.shape.grid_shape, dtype=float)
        for key, stored in self._sparse.items():
            dense[key] = stored
        return dense

    def items(self) -> Iterator[Tuple[Tuple[int, ...], float]]:
        """Nonzero (position, value) pairs in row-major order."""
        if self._dense is not None:
            for position in zip(*np.nonzero(self._dense)):
                yield tuple(int(pos) for pos in position), float(self._dense[position])
        else:
            for position in sorted(self._sparse):
                if self._sparse[position]:
                    yield position, float(self._sparse[position])


class HaarExpansion:
    """sum of alpha_R h_R over |R| = 2^-n, with an optional coarse part over 2^-n < |R| <= 1.

    Expansions are treated as immutable once built: the constructors below populate them and nothing mutates them afterwards.
    """

    def __init__(self, d: int, n: int, allow_coarse: bool = False):
        if d < 1 or n < 0:
            raise InvalidExpansionError(f"Need d >= 1 and n >= 0, got d={d}, n={n}")
        self.d = d
        self.n = n
        self.allow_coarse = allow_coarse
        self._stores: Dict[ShapeVector, _ShapeStore] = {}

    # Construction:
    def _store(self, shape: ShapeVector) -> _ShapeStore:
        if shape.dimension != self.d:
            raise DimensionMismatchError(f"Shape {shape.entries} in a {self.d}-dimensional expansion")
        if shape.order != self.n and not (self.allow_coarse and shape.order < self.n):
            raise InvalidExpansionError(
                f"Shape {shape.entries} has order {shape.order}; this expansion is at scale {self.n} (coarse part allowed: {self.allow_coarse})"
            )
        if shape not in self._stores:
            self._stores[shape] = _ShapeStore(shape)
        return self._stores[shape]

    def set_coefficient(self, shape: ShapeVector, position: Sequence[int], value: float) -> None:
        """Sets alpha_R for the rectangle of the given shape and position."""
        self._store(shape).set(tuple(int(pos) for pos in position), float(value))

    def set_shape(self, shape: ShapeVector, values: np.ndarray) -> None:
        """Sets every coefficient of one shape from a dense array indexed by position vector."""
        self._store(shape).set_dense(np.array(values))

    @classmethod
    def from_shape_arrays(cls, d: int, n: int, arrays: Mapping[ShapeVector, np.ndarray], allow_coarse: bool = False) -> "HaarExpansion":
        """Builds an expansion from dense per-shape arrays."""
        expansion = cls(d, n, allow_coarse=allow_coarse)
        for shape, values in arrays.items():
            expansion.set_shape(shape, values)
        return expansion

    @classmethod
    def constant_signs(cls, n: int, d: int, sign: int = 1) -> "HaarExpansion":
        """Every coefficient equal to `sign` (the full +1 sum by default)."""
        return cls.from_shape_arrays(d, n, {shape: np.full(shape.grid_shape, sign, dtype=np.int8) for shape in ShapeVector.all_of_order(n, d)})

    @classmethod
    def random_signs(cls, n: int, d: int, rng: np.random.Generator) -> "HaarExpansion":
        """Independent uniform +-1 coefficients."""
        arrays = {}
        for shape in ShapeVector.all_of_order(n, d):
            arrays[shape] = (rng.integers(0, 2, size=shape.grid_shape, dtype=np.int8) * 2 - 1).astype(np.int8)
        return cls.from_shape_arrays(d, n, arrays)

    @classmethod
    def random_gaussian(cls, n: int, d: int, rng: np.random.Generator) -> "HaarExpansion":
        """Independent standard normal coefficients."""
        return cls.from_shape_arrays(d, n, {shape: rng.standard_normal(shape.grid_shape) for shape in ShapeVector.all_of_order(n, d)})

    @classmethod
    def from_sign_vector(cls, n: int, d: int, signs: Sequence[int]) -> "HaarExpansion":
        """Builds the expansion from a flat vector in rectangle-enumeration order."""
        signs = np.asarray(signs)
        if signs.size != count_rectangles(n, d):
            raise InvalidExpansionError(f"Expected {count_rectangles(n, d)} signs for n={n}, d={d}; got {signs.size}")

        arrays = {}
        offset = 0
        for shape in ShapeVector.all_of_order(n, d):
            arrays[shape] = signs[offset : offset + shape.cardinality].reshape(shape.grid_shape)
            offset += shape.cardinality
        return cls.from_shape_arrays(d, n, arrays)

    # Access:
    @property
    def shapes(self) -> List[ShapeVector]:
        """Shapes at the top scale |r| = n, sorted."""
        return ShapeVector.all_of_order(self.n, self.d)

    @property
    def coarse_shapes(self) -> List[ShapeVector]:
        """Shapes with |r| < n that carry coefficients, sorted."""
        return sorted(shape for shape in self._stores if shape.order < self.n)

    def coefficients(self, shape: ShapeVector) -> np.ndarray:
        """Dense coefficient array for the shape (zeros if nothing was set)."""
        if shape in self._stores:
            return self._stores[shape].array()
        if shape.dimension != self.d:
            raise DimensionMismatchError(f"Shape {shape.entries} in a {self.d}-dimensional expansion")
        return np.zeros(shape.grid_shape, dtype=float)

    def coefficient(self, rect: DyadicRectangle) -> float:
        """alpha_R"""
        return float(self.coefficients(rect.shape)[rect.position])

    def is_dense(self, shape: ShapeVector) -> bool:
        """Whether the shape's storage has switched to a dense array."""
        return shape in self._stores and self._stores[shape].is_dense

    def items(self, include_coarse: bool = True) -> Iterator[Tuple[ShapeVector, Tuple[int, ...], float]]:
        """Nonzero coefficients as (shape, position, value), in enumeration order."""
        shapes = sorted(self._stores)
        for shape in shapes:
            if shape.order < self.n and not include_coarse:
                continue
            for position, value in self._stores[shape].items():
                yield shape, position, value

    def to_vector(self) -> np.ndarray:
        """The top-scale coefficients as a flat vector in rectangle-enumeration order."""
        return np.concatenate([self.coefficients(shape).ravel() for shape in self.shapes])

    def absolute_sum(self) -> float:
        """sum over |R| = 2^-n of |alpha_R|"""
        return float(sum(np.abs(self.coefficients(shape)).sum() for shape in self.shapes))

    def square_sum(self) -> float:
        """sum over |R| = 2^-n of alpha_R^2"""
        return float(sum(np.square(self.coefficients(shape), dtype=float).sum() for shape in self.shapes))

    def top_scale(self) -> "HaarExpansion":
        """The same expansion with the coarse part dropped."""
        return HaarExpansion.from_shape_arrays(self.d, self.n, {shape: self.coefficients(shape) for shape in self.shapes if shape in self._stores})

    # Serialization:
    def to_json(self) -> Dict[str, Any]:
        """{d, n, entries: [{shape, position, value}]}"""
        return {
            "d": self.d,
            "n": self.n,
            "entries": [{"shape": list(shape.entries), "position": list(position), "value": value} for shape, position, value in self.items()],
        }

    def dumps(self) -> str:
        """JSON text of `to_json`."""
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, blob: Union[str, Mapping[str, Any]]) -> "HaarExpansion":
        """Inverse of `to_json`; coarse entries switch the coarse part on."""
        if isinstance(blob, str):
            blob = json.loads(blob)

        try:
            d, n, entries = int(blob["d"]), int(blob["n"]), blob["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidExpansionError(f"Malformed expansion JSON: {exc}") from exc

        allow_coarse = any(sum(entry["shape"]) < n for entry in entries)
        expansion = cls(d, n, allow_coarse=allow_coarse)
        for entry in entries:
            expansion.set_coefficient(ShapeVector(tuple(entry["shape"])), tuple(entry["position"]), entry["value"])
        return expansion


@dataclass(frozen=True, eq=False)
class RFunction:
    """f_r = sum over R in D_r of eps_R h_R with eps_R in {-1, 0, 1}: a generalized Rademacher function."""

    shape: ShapeVector
    signs: np.ndarray

    def __post_init__(self):
        signs = np.asarray(self.signs).astype(np.int8)
        if signs.shape != self.shape.grid_shape:
            raise InvalidExpansionError(f"Signs of shape {signs.shape} do not fit shape {self.shape.entries}")
        if not np.all(np.isin(signs, (-1, 0, 1))):
            raise InvalidExpansionError("r-function signs must be -1, 0 or 1")
        signs.setflags(write=False)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_coefficients(cls, shape: ShapeVector, coefficients: np.ndarray, zero_sign: int = 1) -> "RFunction":
        """eps_R = sgn(coefficient), with zeros mapped to `zero_sign` (use 0 to keep them out)."""
        signs = np.sign(coefficients).astype(np.int8)
        signs[signs == 0] = zero_sign
        return cls(shape, signs)

    @property
    def is_full(self) -> bool:
        """All signs nonzero, in which case |f_r| = 1 everywhere."""
        return bool(np.all(self.signs != 0))

    def to_grid(self, levels: Optional[Sequence[int]] = None) -> GridFunction:
        """Exact values on the grid (default: one level below the finest side on each axis)."""
        levels = tuple(levels) if levels is not None else tuple(entry + 1 for entry in self.shape.entries)
        check_grid_budget(levels)
        return GridFunction(levels, shape_layer(self.shape, self.signs, levels))


def expansion_to_grid(expansion: HaarExpansion, levels: Optional[Sequence[int]] = None) -> GridFunction:
    """Exact pointwise values of the expansion on the (n+1, ..., n+1) grid.

    Each shape's rectangles partition the cube, so every shape contributes exactly one term per cell. Shapes are summed in
    enumeration order so the result does not depend on anything but the coefficients.
    """
    levels = tuple(levels) if levels is not None else hyperbolic_levels(expansion.n, expansion.d)
    if len(levels) != expansion.d:
        raise DimensionMismatchError(f"Levels {levels} for a {expansion.d}-dimensional expansion")
    check_grid_budget(levels)

    shapes = expansion.coarse_shapes + expansion.shapes
    integral_valued = all(np.issubdtype(expansion.coefficients(shape).dtype, np.integer) for shape in shapes)
    accumulator = np.zeros(tuple(2**level for level in levels), dtype=np.int32 if integral_valued else float)

    LOGGER.debug(f"[📐] Evaluating a scale-{expansion.n} expansion in dimension {expansion.d} on the {levels} grid...")
    for shape in shapes:
        coefficients = expansion.coefficients(shape)
        if not np.any(coefficients):
            continue
        accumulator += shape_layer(shape, coefficients, levels)

    return GridFunction(levels, accumulator)


def rfunctions_of(expansion: HaarExpansion) -> List[RFunction]:
    """Splits a signed expansion into its r-functions, one per top-scale shape."""
    return [RFunction.from_coefficients(shape, expansion.coefficients(shape), zero_sign=0) for shape in expansion.shapes]


def expansion_from_rfunctions(rfunctions: Iterable[RFunction], n: Optional[int] = None) -> HaarExpansion:
    """F = sum of the r-functions (all of the same order)."""
    rfunctions = list(rfunctions)
    if not rfunctions:
        raise InvalidExpansionError("Need at least one r-function")
    d = rfunctions[0].shape.dimension
    n = rfunctions[0].shape.order if n is None else n
    return HaarExpansion.from_shape_arrays(d, n, {rfunction.shape: rfunction.signs for rfunction in rfunctions})
