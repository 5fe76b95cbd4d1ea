"""Tests for the sampled norms of the discrepancy function.

:Module: starlab.tests.discrepancy.test_sampled
"""
import math

import numpy as np
import pytest

from starlab.discrepancy import (
    DiscrepancyField,
    default_resolution,
    evaluation_levels,
    finest_gap,
    l2_norm_exact,
    lp_norm_sampled,
    orlicz_norm_sampled,
    sample_discrepancy,
    star_discrepancy_exact,
    superlevel_measure,
)
from starlab.hyperbolic import OrliczSpec
from starlab.point_sets import PointSet, random_uniform, van_der_corput


def test_sampling_is_reproducible() -> None:
    """Same seed, same samples, regardless of the number of threads."""
    field = DiscrepancyField(van_der_corput(5))
    first = sample_discrepancy(field, resolution=6, seed=3, threads=1)
    assert first.size == 2**12
    np.testing.assert_array_equal(first, sample_discrepancy(field, resolution=6, seed=3, threads=4))
    assert not np.array_equal(first, sample_discrepancy(field, resolution=6, seed=4))

    uniform = sample_discrepancy(field, samples=1000, seed=3)
    assert uniform.size == 1000
    with pytest.raises(ValueError):
        sample_discrepancy(field, samples=0)


def test_default_resolution() -> None:
    """2^10 strata per axis in the plane, fewer as d grows."""
    assert default_resolution(2) == 10
    assert default_resolution(3) == 6
    assert default_resolution(6) == 4


def test_sampled_l2_is_close_to_exact() -> None:
    """The stratified estimate of ||D_N||_2 lands near the closed form."""
    field = DiscrepancyField(van_der_corput(6))
    estimate = lp_norm_sampled(field, 2.0, resolution=8, seed=1)
    exact = l2_norm_exact(field)
    assert estimate.value == pytest.approx(exact, rel=0.05)
    assert estimate.error > 0
    assert estimate.samples == 2**16


def test_sampled_sup_is_a_lower_bound() -> None:
    """The sampled maximum never exceeds the exact star discrepancy."""
    field = DiscrepancyField(random_uniform(30, 2, seed=2))
    sampled = lp_norm_sampled(field, math.inf, resolution=7, seed=2)
    assert sampled.error == 0.0
    assert sampled.value <= star_discrepancy_exact(field).value + 1e-12

    with pytest.raises(ValueError):
        lp_norm_sampled(field, 0.5)


def test_superlevel_measure() -> None:
    """Thresholds below -N give the whole cube, above N nothing."""
    field = DiscrepancyField(van_der_corput(4))
    assert superlevel_measure(field, -17, resolution=5, seed=1).value == 1.0
    assert superlevel_measure(field, 17, resolution=5, seed=1).value == 0.0

    half = superlevel_measure(field, 0.0, resolution=6, seed=1)
    assert 0 < half.value < 1
    assert half.error == pytest.approx(math.sqrt(half.value * (1 - half.value) / 2**12))


def test_evaluation_levels_follow_the_gaps() -> None:
    """Cells of at most half the finest coordinate gap."""
    field = DiscrepancyField(van_der_corput(3))
    assert finest_gap(field) == 0.125
    assert evaluation_levels(field) == (4, 4)
    assert evaluation_levels(field, 6) == (6, 6)
    assert finest_gap(DiscrepancyField(PointSet([[0.25, 0.5]]))) == 0.25


def test_orlicz_evaluation_modes() -> None:
    """Cell averages give a certified lower bound; with the coordinates on cell edges the midpoint values are the averages."""
    field = DiscrepancyField(van_der_corput(4))
    exact = l2_norm_exact(field)

    average = orlicz_norm_sampled(field, OrliczSpec.power(2), evaluation="average")
    midpoint = orlicz_norm_sampled(field, OrliczSpec.power(2), evaluation="midpoint")
    assert average <= exact
    assert midpoint == pytest.approx(average, rel=1e-9)
    assert orlicz_norm_sampled(field, OrliczSpec.exp(2)) > 0

    with pytest.raises(ValueError):
        orlicz_norm_sampled(field, OrliczSpec.power(2), evaluation="trapezoid")
