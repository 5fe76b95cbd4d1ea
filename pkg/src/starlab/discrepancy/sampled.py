"""Sampled norms of the discrepancy function

There is no closed form for ||D_N||_p with p not in {2, inf}, so these estimate it by stratified sampling: one uniform point in every
cell of a dyadic grid. The strata are cut into a fixed number of blocks along the first axis and each block draws from its own
child seed, so estimates depend on the seed but not on the thread count.

The Orlicz norms are computed on a dyadic evaluation grid fine enough to separate the point coordinates, with the same bisection as
the exact Orlicz norm of a grid function.

:Module: starlab.discrepancy.sampled
"""
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from starlab.discrepancy.field import DiscrepancyField
from starlab.dyadic import check_grid_budget
from starlab.hyperbolic import OrliczSpec, orlicz_norm
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER
from starlab.utils.parallel import run_seeded_blocks

DEFAULT_RESOLUTION = {1: 16, 2: 10, 3: 6}
MAX_BLOCKS = 16
EVALUATION_MODES = ("midpoint", "average")


class SampledEstimate(NamedTuple):
    """A Monte-Carlo estimate with its standard error."""

    value: float
    error: float
    samples: int


def default_resolution(d: int) -> int:
    """Per-axis sampling level: 2^10 strata per axis in d=2, 2^6 in d=3."""
    return DEFAULT_RESOLUTION.get(d, max(1, 24 // d))


def _stratified_block(field: DiscrepancyField, resolution: int, n_blocks: int, block: int, rng: np.random.Generator) -> np.ndarray:
    """D_N at one uniform point in each cell whose first-axis index falls in the block."""
    per_axis = 2**resolution
    rows = per_axis // n_blocks
    first = np.arange(block * rows, (block + 1) * rows)
    others = [np.arange(per_axis)] * (field.dimension - 1)
    corners = np.stack([axis.ravel() for axis in np.meshgrid(first, *others, indexing="ij")], axis=1)
    points = (corners + rng.random(corners.shape)) / per_axis
    return field.eval_many(points)


def _uniform_block(field: DiscrepancyField, count: int, rng: np.random.Generator) -> np.ndarray:
    return field.eval_many(rng.random((count, field.dimension)))


def sample_discrepancy(
    field: DiscrepancyField, resolution: Optional[int] = None, samples: Optional[int] = None, seed: Optional[int] = None, threads: Optional[int] = None
) -> np.ndarray:
    """D_N at stratified points (one per cell at the given resolution) or, with `samples`, at that many i.i.d. uniform points."""
    if samples is not None:
        if samples < 1:
            raise ValueError(f"Need at least one sample, got {samples}")
        n_blocks = min(MAX_BLOCKS, samples)
        sizes = [samples // n_blocks + (1 if block < samples % n_blocks else 0) for block in range(n_blocks)]
        blocks = run_seeded_blocks(lambda block, rng: _uniform_block(field, sizes[block], rng), n_blocks, seed, threads)
        return np.concatenate(blocks)

    resolution = default_resolution(field.dimension) if resolution is None else resolution
    check_grid_budget((resolution,) * field.dimension)
    n_blocks = min(MAX_BLOCKS, 2**resolution)
    LOGGER.debug(f"[🎲] Sampling D_N at 2^{resolution * field.dimension} stratified points in {n_blocks} blocks...")
    blocks = run_seeded_blocks(lambda block, rng: _stratified_block(field, resolution, n_blocks, block, rng), n_blocks, seed, threads)
    return np.concatenate(blocks)


def lp_norm_sampled(
    field: DiscrepancyField,
    p: float,
    resolution: Optional[int] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    threads: Optional[int] = None,
) -> SampledEstimate:
    """Estimate of ||D_N||_p; the standard error comes from the sample variance and the delta method, and is conservative for strata."""
    if not p >= 1:
        raise ValueError(f"L^p norms need p >= 1, got {p}")

    values = np.abs(sample_discrepancy(field, resolution=resolution, samples=samples, seed=seed, threads=threads))
    if math.isinf(p):
        return SampledEstimate(float(values.max()), 0.0, values.size)

    # Scaled by N so that large p does not overflow:
    scale = float(field.n_points)
    powers = np.power(values / scale, p)
    mean = float(np.mean(powers))
    mean_error = float(np.std(powers, ddof=1)) / math.sqrt(values.size) if values.size > 1 else 0.0

    if mean == 0.0:
        return SampledEstimate(0.0, 0.0, values.size)

    norm = scale * mean ** (1.0 / p)
    return SampledEstimate(norm, norm * mean_error / (p * mean), values.size)


def superlevel_measure(
    field: DiscrepancyField, threshold: float, resolution: Optional[int] = None, seed: Optional[int] = None, threads: Optional[int] = None
) -> SampledEstimate:
    """|{x : D_N(x) >= threshold}| with its binomial standard error."""
    values = sample_discrepancy(field, resolution=resolution, seed=seed, threads=threads)
    fraction = float(np.mean(values >= threshold))
    return SampledEstimate(fraction, math.sqrt(fraction * (1.0 - fraction) / values.size), values.size)


def finest_gap(field: DiscrepancyField) -> float:
    """The smallest positive distance between consecutive values of {0, 1, p_j} on any axis."""
    gaps: List[float] = []
    for values in field.axis_values:
        differences = np.diff(np.union1d(values, [0.0, 1.0]))
        gaps.append(float(differences[differences > 0].min()))
    return min(gaps)


def evaluation_levels(field: DiscrepancyField, resolution: Optional[int] = None) -> Tuple[int, ...]:
    """The per-axis grid for sampled Orlicz norms: cells at most half the finest coordinate gap, capped by GridBudgetBits."""
    if resolution is None:
        resolution = max(1, math.ceil(math.log2(2.0 / finest_gap(field))))
        cap = STARLAB_CONFIGURATION.settings["grid_budget_bits"] // field.dimension
        if resolution > cap:
            LOGGER.warning(f"[⚠️] The coordinate gaps of {field!r} call for 2^{resolution} cells per axis. Capping the resolution at 2^{cap}.")
            resolution = cap

    levels = (resolution,) * field.dimension
    check_grid_budget(levels)
    return levels


def orlicz_norm_sampled(
    field: DiscrepancyField, spec: OrliczSpec, resolution: Optional[int] = None, evaluation: str = "midpoint", tol: Optional[float] = None
) -> float:
    """The Orlicz norm of D_N approximated on a dyadic evaluation grid.

    `midpoint` uses the values of D_N at the cell centers. `average` uses the exact cell averages instead, which can only lower an
    Orlicz norm, so the result is a certified lower bound (at the price of N times more work).
    """
    if evaluation not in EVALUATION_MODES:
        raise ValueError(f"Unknown evaluation mode: {evaluation}. Pick one of {', '.join(EVALUATION_MODES)}")

    levels = evaluation_levels(field, resolution)
    grid = field.grid_values(levels) if evaluation == "midpoint" else field.cell_integrals(levels)
    return orlicz_norm(grid, spec, tol)
