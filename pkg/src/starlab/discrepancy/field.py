"""The discrepancy function of a point set

D_N(x) = #(P cap [0,x)) - N * x_1 * ... * x_d, with strict inequality p_j < x_j for membership.

Box counts are answered from an occupancy table when it fits the CountingTableBudget: with u_j the sorted distinct j-th
coordinates, T[a_1, ..., a_d] is the number of points whose j-th coordinate is among the a_j smallest values of u_j for every j.
A query x then costs one searchsorted per axis. Over budget, points are counted directly in blocks.

:Module: starlab.discrepancy.field
"""
from functools import cached_property
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np

from starlab.dyadic import DimensionMismatchError, DyadicDomainError, GridFunction, cell_centers, check_grid_budget
from starlab.point_sets import PointSet
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER

BLOCK_ENTRIES = 2**22


def exclusive_cumsum(values: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Cumulative sums over the given axes that leave out the current index: out[a] = sum over b < a (in every listed axis)."""
    result = values
    for axis in axes:
        result = np.cumsum(result, axis=axis)
        pad = [(0, 0)] * result.ndim
        pad[axis] = (1, 0)
        result = np.pad(result, pad)
        result = np.delete(result, -1, axis=axis)
    return result


def inclusive_cumsum(values: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """Cumulative sums over the given axes: out[a] = sum over b <= a."""
    result = values
    for axis in axes:
        result = np.cumsum(result, axis=axis)
    return result


class DiscrepancyField:
    """D_N for a fixed point set. Read-only once built."""

    def __init__(self, pointset: PointSet):
        self.pointset = pointset

    @property
    def n_points(self) -> int:
        """N"""
        return self.pointset.n_points

    @property
    def dimension(self) -> int:
        """d"""
        return self.pointset.dimension

    @property
    def points(self) -> np.ndarray:
        """The (N, d) coordinate array."""
        return self.pointset.points

    @cached_property
    def axis_values(self) -> List[np.ndarray]:
        """Sorted distinct coordinates per axis."""
        return [np.unique(self.points[:, axis]) for axis in range(self.dimension)]

    @cached_property
    def counting_table(self) -> Optional[np.ndarray]:
        """The occupancy table T (shape: len(u_j) + 1 per axis), or None when it is over the CountingTableBudget."""
        shape = tuple(values.size + 1 for values in self.axis_values)
        if int(np.prod(shape, dtype=float)) > STARLAB_CONFIGURATION.settings["counting_table_budget"]:
            LOGGER.debug(f"[🧮] The counting table {shape} is over budget. Counting points directly.")
            return None

        histogram = np.zeros(tuple(size - 1 for size in shape), dtype=np.int64)
        ranks = tuple(np.searchsorted(values, self.points[:, axis]) for axis, values in enumerate(self.axis_values))
        np.add.at(histogram, ranks, 1)
        return exclusive_cumsum(np.pad(histogram, [(0, 1)] * self.dimension), range(self.dimension))

    def _check_queries(self, queries: np.ndarray) -> np.ndarray:
        queries = np.array(queries, dtype=float, ndmin=2)
        if queries.shape[-1] != self.dimension:
            raise DimensionMismatchError(f"Queries of dimension {queries.shape[-1]} against a {self.dimension}-dimensional point set")
        if not np.all((queries >= 0.0) & (queries <= 1.0)):
            raise DyadicDomainError("Discrepancy queries must lie in [0,1]^d")
        return queries

    def count_open(self, queries: np.ndarray) -> np.ndarray:
        """#(P cap [0,x)) for each row x of the (M, d) query array."""
        queries = self._check_queries(queries)
        table = self.counting_table
        if table is not None:
            index = tuple(np.searchsorted(values, queries[:, axis], side="left") for axis, values in enumerate(self.axis_values))
            return table[index]

        counts = np.empty(queries.shape[0], dtype=np.int64)
        block = max(1, BLOCK_ENTRIES // (self.n_points * self.dimension))
        for start in range(0, queries.shape[0], block):
            chunk = queries[start : start + block]
            counts[start : start + block] = np.all(self.points[None, :, :] < chunk[:, None, :], axis=2).sum(axis=1)
        return counts

    def eval_many(self, queries: np.ndarray) -> np.ndarray:
        """D_N at each row of the (M, d) query array."""
        queries = self._check_queries(queries)
        return self.count_open(queries) - self.n_points * np.prod(queries, axis=1)

    def eval(self, x: Sequence[float]) -> float:
        """D_N(x) for x in [0,1]^d."""
        return float(self.eval_many(np.asarray(x, dtype=float)[None, :])[0])

    def grid_values(self, levels: Sequence[int]) -> GridFunction:
        """D_N at the cell centers of the grid with the given levels."""
        levels = tuple(levels)
        if len(levels) != self.dimension:
            raise DimensionMismatchError(f"Levels {levels} for a {self.dimension}-dimensional point set")
        check_grid_budget(levels)

        centers = [center.ravel() for center in cell_centers(levels)]
        volume = np.ones((1,) * self.dimension)
        for center in cell_centers(levels):
            volume = volume * center

        table = self.counting_table
        if table is not None:
            index = [np.searchsorted(values, center, side="left") for values, center in zip(self.axis_values, centers)]
            counts = table[np.ix_(*index)]
        else:
            mesh = np.stack([axis.ravel() for axis in np.meshgrid(*centers, indexing="ij")], axis=1)
            counts = self.count_open(mesh).reshape(tuple(2**level for level in levels))

        return GridFunction(levels, counts - self.n_points * volume)

    def overlap_matrices(self, levels: Sequence[int]) -> List[np.ndarray]:
        """Per axis, the (N, 2^m_j) matrix of |{x in cell : x > p_j}| for every point and cell."""
        matrices = []
        for axis, level in enumerate(levels):
            edges = np.arange(2**level + 1) / 2**level
            left, right = edges[:-1][None, :], edges[1:][None, :]
            coordinate = self.points[:, axis][:, None]
            matrices.append(np.clip(right - np.maximum(left, coordinate), 0.0, None))
        return matrices

    def cell_integrals(self, levels: Sequence[int]) -> GridFunction:
        """Exact cell averages of D_N on the grid with the given levels.

        The counting part integrates 1_{x > p} over a cell as a product of per-axis overlaps, contracted over the points; the volume
        part is N * prod_j (b_j^2 - a_j^2) / 2 in closed form. Pairing the result with any function of the same grid gives the
        exact <D_N, g>.
        """
        levels = tuple(levels)
        if len(levels) != self.dimension:
            raise DimensionMismatchError(f"Levels {levels} for a {self.dimension}-dimensional point set")
        check_grid_budget(levels)

        shape = tuple(2**level for level in levels)
        counting = np.zeros(shape, dtype=float)
        subscripts = ",".join(f"p{chr(ord('a') + axis)}" for axis in range(self.dimension))
        subscripts += "->" + "".join(chr(ord("a") + axis) for axis in range(self.dimension))

        # Blocks of points keep the contraction's temporaries small; block order is fixed.
        block = max(1, BLOCK_ENTRIES // max(1, max(shape)))
        matrices = self.overlap_matrices(levels)
        for start in range(0, self.n_points, block):
            counting += np.einsum(subscripts, *(matrix[start : start + block] for matrix in matrices), optimize=True)

        volume = np.ones((1,) * self.dimension)
        for axis, level in enumerate(levels):
            edges = np.arange(2**level + 1) / 2**level
            axis_shape = [1] * self.dimension
            axis_shape[axis] = 2**level
            volume = volume * ((edges[1:] ** 2 - edges[:-1] ** 2) / 2).reshape(axis_shape)

        cell_volume = 2.0 ** -sum(levels)
        return GridFunction(levels, (counting - self.n_points * volume) / cell_volume)

    def pairing(self, g: GridFunction) -> float:
        """Exact <D_N, g> for a piecewise-constant g.

        For each point, the integral of g over the box {x > p} splits per axis into the full cells above p and the part of p's own
        cell to its right. With U the suffix sums of g (padded with a trailing zero), that is 2^d table lookups per point. The volume
        part is a separable contraction of g against the per-axis cell integrals of x_j.
        """
        if g.dimension != self.dimension:
            raise DimensionMismatchError(f"A {g.dimension}-dimensional grid against a {self.dimension}-dimensional point set")

        levels = g.levels
        values = g.values.astype(float)
        suffix = values
        for axis in range(self.dimension):
            suffix = np.flip(np.cumsum(np.flip(suffix, axis=axis), axis=axis), axis=axis)
        suffix = np.pad(suffix, [(0, 1)] * self.dimension)

        cells = []
        weights = []
        for axis, level in enumerate(levels):
            width = 2.0**-level
            coordinate = self.points[:, axis]
            cell = np.floor(coordinate * 2**level).astype(np.int64)
            inside = (cell + 1) * width - coordinate
            cells.append(cell)
            # Lookup at the point's own cell counts that whole cell: weight it by the part right of p; the cells above get the rest.
            weights.append((inside, width - inside))

        counting = 0.0
        for corner in product((0, 1), repeat=self.dimension):
            index = tuple(cell + offset for cell, offset in zip(cells, corner))
            weight = np.ones(self.n_points)
            for axis, offset in enumerate(corner):
                weight = weight * weights[axis][offset]
            counting += float(np.dot(weight, suffix[index]))

        linear = values
        for level in reversed(levels):
            edges = np.arange(2**level + 1) / 2**level
            linear = linear @ ((edges[1:] ** 2 - edges[:-1] ** 2) / 2)

        return counting - self.n_points * float(linear)

    def l1_lower_bound(self, levels: Sequence[int]) -> float:
        """||D_N||_1 >= sum over cells of |integral of D_N over the cell|."""
        averages = self.cell_integrals(levels)
        return float(np.sum(np.abs(averages.values))) * averages.cell_volume

    def __repr__(self) -> str:
        return f"DiscrepancyField({self.pointset.label}, N={self.n_points}, d={self.dimension})"


def critical_grid(field: DiscrepancyField) -> Tuple[np.ndarray, ...]:
    """Per axis, the distinct point coordinates together with 1."""
    return tuple(np.union1d(values, [1.0]) for values in field.axis_values)
