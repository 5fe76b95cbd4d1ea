"""Tests for the Beck-gain coincidence sums.

:Module: starlab.tests.certificates.test_beck
"""
import numpy as np
import pytest

from starlab.certificates import (
    InvalidPatternError,
    beck_gain_sum,
    coincidence_pattern_sum,
    free_parameters,
    pattern_growth,
    sign_expansion,
    validate_pattern,
)
from starlab.dyadic import ShapeVector
from starlab.hyperbolic import InvalidExpansionError, RFunction, hyperbolic_levels


def brute_force(n: int, d: int) -> np.ndarray:
    """sum over ordered pairs r != s with r_1 = s_1 of f_r f_s, one product at a time."""
    levels = hyperbolic_levels(n, d)
    shapes = ShapeVector.all_of_order(n, d)
    total = np.zeros(tuple(2**level for level in levels), dtype=np.int64)
    for first in shapes:
        for second in shapes:
            if first != second and first.entries[0] == second.entries[0]:
                total += RFunction(first, np.ones(first.grid_shape)).to_grid(levels).values.astype(np.int64) * RFunction(
                    second, np.ones(second.grid_shape)
                ).to_grid(levels).values.astype(np.int64)
    return total


@pytest.mark.parametrize("n, pairs", [(0, 0), (1, 2), (2, 8), (3, 20)])
def test_beck_gain_sum_matches_brute_force(n: int, pairs: int) -> None:
    """The grouped evaluation equals the sum of the individual products."""
    report = beck_gain_sum(n, 3)
    assert len(report.pairs) == pairs
    np.testing.assert_array_equal(report.grid.values, brute_force(n, 3))
    assert [row["p"] for row in report.to_dict()["norms"]] == [2.0, 4.0, 8.0]


def test_beck_gain_sum_needs_three_dimensions() -> None:
    """There is nothing to gain in the plane."""
    with pytest.raises(InvalidExpansionError):
        beck_gain_sum(3, 2)


def test_pattern_validation() -> None:
    """Coincidences are normalized, deduplicated and range checked."""
    assert validate_pattern(3, 3, [(1, 0, 2), (0, 1, 2), (2, 1, 0)]) == [(0, 1, 2), (1, 2, 0)]
    for k, pattern in ((4, []), (1, []), (2, [(0, 0, 0)]), (2, [(0, 2, 0)]), (2, [(0, 1, 3)]), (2, [(0, 1)])):
        with pytest.raises(InvalidPatternError):
            validate_pattern(k, 3, pattern)


@pytest.mark.parametrize(
    "k, d, pattern, expected",
    [
        (2, 3, [], 4),
        (2, 3, [(0, 1, 0)], 3),
        (2, 3, [(0, 1, 0), (0, 1, 1)], 2),
        (3, 3, [(0, 1, 0), (1, 2, 0)], 4),
        (2, 4, [(0, 1, 0)], 5),
    ],
)
def test_free_parameters(k: int, d: int, pattern, expected: int) -> None:
    """k d entries less one order constraint per member and the independent coincidences."""
    assert free_parameters(k, d, pattern) == expected


def test_pattern_sum_generalizes_the_beck_sum() -> None:
    """The pattern r_1 = s_1 over pairs is the basic coincidence sum."""
    for n in range(0, 4):
        basic = beck_gain_sum(n, 3)
        pattern = coincidence_pattern_sum(n, 3, 2, [(0, 1, 0)])
        assert pattern.tuples == len(basic.pairs)
        assert pattern.free_parameters == 3
        assert pattern.rows[0].norm == pytest.approx(basic.rows[0].norm)


def test_pattern_growth() -> None:
    """The growth fit runs over the scales with a nonzero sum; the prediction is M / 2."""
    growth = pattern_growth([2, 3, 4, 5], 3, 2, [(0, 1, 0)])
    assert growth.predicted == 1.5
    assert growth.fit is not None
    assert growth.fit.exponent > 0
    assert len(growth.to_dict()["reports"]) == 4

    seeded = pattern_growth([2, 3, 4], 3, 2, [(0, 1, 0)], sign_mode="random", seed=5)
    assert seeded.to_dict() == pattern_growth([2, 3, 4], 3, 2, [(0, 1, 0)], sign_mode="random", seed=5).to_dict()


def test_sign_expansion() -> None:
    """All plus, or random with a generator."""
    assert sign_expansion(2, 3).absolute_sum() == 24
    random = sign_expansion(2, 3, "random", np.random.default_rng(1))
    assert set(np.unique(random.to_vector()).tolist()) <= {-1, 1}
    with pytest.raises(InvalidExpansionError):
        sign_expansion(2, 3, "minus")
