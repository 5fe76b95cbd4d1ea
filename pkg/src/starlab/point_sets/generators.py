"""Point-set generators: van der Corput, digit-shifted van der Corput and uniform random sets

The van der Corput set of size N = 2^k is {(i/N, phi(i)) : 0 <= i < N}, phi being the base-2 radical inverse (the k-bit index read
backwards). The shifted variant XORs the index digits with a k-bit mask before inverting them, which keeps the net property: every
dyadic box of volume 2^-k holds exactly one point.

:Module: starlab.point_sets.generators
"""
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from starlab.point_sets.point_set import PointSet, PointSetError, PointSetSizeError
from starlab.utils.logging import LOGGER

MAX_VDC_BITS = 20


def _bit_reverse(indices: np.ndarray, bits: int) -> np.ndarray:
    reversed_indices = np.zeros_like(indices)
    for bit in range(bits):
        reversed_indices |= ((indices >> bit) & 1) << (bits - 1 - bit)
    return reversed_indices


def shifted_van_der_corput(k: int, shift: int) -> PointSet:
    """{(i/2^k, phi(i XOR shift))}: the van der Corput set with its second coordinate digit-shifted."""
    if not 0 <= k <= MAX_VDC_BITS:
        raise PointSetSizeError(f"van der Corput sets are generated for 0 <= k <= {MAX_VDC_BITS}, got k={k}")
    if not 0 <= shift < 2**k:
        raise PointSetError(f"The shift must be a {k}-bit mask, got {shift}")

    size = 2**k
    indices = np.arange(size, dtype=np.int64)
    points = np.column_stack((indices / size, _bit_reverse(indices ^ shift, k) / size))
    label = f"vdc(k={k})" if not shift else f"vdc(k={k},shift={shift})"
    return PointSet(points, label=label)


def van_der_corput(k: int) -> PointSet:
    """{(i/2^k, phi(i))} for 0 <= i < 2^k."""
    return shifted_van_der_corput(k, 0)


def random_uniform(n_points: int, d: int, seed: Optional[int] = None) -> PointSet:
    """N i.i.d. uniform points in [0,1)^d, deterministic for a fixed seed."""
    if n_points < 1 or d < 1:
        raise PointSetError(f"Need N >= 1 and d >= 1, got N={n_points}, d={d}")
    rng = np.random.default_rng(seed)
    return PointSet(rng.random((n_points, d)), label=f"random(N={n_points},d={d},seed={seed})")


def best_shift(
    k: int,
    criterion: Callable[[PointSet], float],
    masks: Optional[Sequence[int]] = None,
    count: int = 16,
    seed: Optional[int] = None,
) -> Tuple[int, float]:
    """The shift mask whose shifted van der Corput set minimizes the criterion.

    Without explicit masks, `count` distinct masks are drawn at random (every mask when count >= 2^k). Ties go to the smaller mask.
    """
    if masks is None:
        if count >= 2**k:
            masks = range(2**k)
        else:
            masks = np.random.default_rng(seed).choice(2**k, size=count, replace=False)

    best: Optional[Tuple[float, int]] = None
    for mask in sorted(int(mask) for mask in masks):
        value = float(criterion(shifted_van_der_corput(k, mask)))
        LOGGER.debug(f"[🔀] k={k}, shift={mask}: criterion {value:.6g}")
        if best is None or value < best[0]:
            best = (value, mask)

    if best is None:
        raise PointSetError("No shift masks to search")

    return best[1], best[0]
