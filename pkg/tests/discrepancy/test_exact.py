"""Tests for the exact norms of the discrepancy function.

:Module: starlab.tests.discrepancy.test_exact
"""
# pylint: disable=unused-argument
import math
from typing import Any, Dict

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starlab.discrepancy import (
    DiscrepancyField,
    PairBudgetError,
    StarDiscrepancyBudgetError,
    l2_norm_exact,
    l2_squared_exact,
    lemma1_rfunction,
    partial_parseval,
    star_discrepancy_exact,
)
from starlab.dyadic import ShapeVector
from starlab.point_sets import PointSet, random_uniform, van_der_corput


@pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.9])
def test_l2_of_one_point_in_one_dimension(p: float) -> None:
    """integral of (1_{x > p} - x)^2 = p^2 - p + 1/3."""
    assert l2_squared_exact(DiscrepancyField(PointSet([[p]]))) == pytest.approx(p * p - p + 1 / 3, abs=1e-15)


def test_l2_of_the_origin_in_two_dimensions() -> None:
    """One point at the origin: the integral of (1 - xy)^2 = 1 - 1/2 + 1/9."""
    assert l2_squared_exact(DiscrepancyField(PointSet([[0.0, 0.0]]))) == pytest.approx(1 - 0.5 + 1 / 9, abs=1e-15)


def test_l2_matches_a_fine_grid() -> None:
    """The closed form agrees with the midpoint rule on a fine grid."""
    field = DiscrepancyField(van_der_corput(5))
    grid = field.grid_values((9, 9))
    assert l2_norm_exact(field) == pytest.approx(math.sqrt(grid.inner(grid)), rel=1e-2)


@pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.8])
def test_star_discrepancy_of_one_point(p: float) -> None:
    """In one dimension D* of {p} is max(p, 1 - p), attained at x = p from one side or the other."""
    result = star_discrepancy_exact(DiscrepancyField(PointSet([[p]])))
    assert result.value == pytest.approx(max(p, 1 - p))
    assert result.witness == (p,)
    assert result.closed == (1 - p >= p)


@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=25), st.integers(min_value=1, max_value=3))
@settings(max_examples=30, deadline=None)
def test_star_discrepancy_bounds_every_sample(seed: int, n_points: int, d: int) -> None:
    """No evaluation of |D_N| exceeds the exact sup, and the witness really attains it."""
    field = DiscrepancyField(random_uniform(n_points, d, seed=seed))
    result = star_discrepancy_exact(field)

    queries = np.random.default_rng(seed).random((500, d))
    assert np.max(np.abs(field.eval_many(queries))) <= result.value + 1e-9

    witness = np.array(result.witness)
    if result.closed:
        count = int(np.sum(np.all(field.points <= witness, axis=1)))
        assert count - n_points * np.prod(witness) == pytest.approx(result.value)
    else:
        count = int(np.sum(np.all(field.points < witness, axis=1)))
        assert n_points * np.prod(witness) - count == pytest.approx(result.value)


def test_budgets(test_configuration: Dict[str, Any]) -> None:
    """Over-budget exact computations refuse to start."""
    from starlab.utils.configuration import STARLAB_CONFIGURATION

    field = DiscrepancyField(van_der_corput(6))
    STARLAB_CONFIGURATION.override(star_discrepancy_cell_budget=100, pair_budget=100)
    with pytest.raises(StarDiscrepancyBudgetError):
        star_discrepancy_exact(field)
    with pytest.raises(PairBudgetError):
        l2_squared_exact(field)


def test_lemma1_pairing() -> None:
    """The sign-optimal r-function pairs with D_N to the sum of |<D_N, h_R>|."""
    field = DiscrepancyField(van_der_corput(5))
    for shape in ShapeVector.all_of_order(4, 2):
        result = lemma1_rfunction(field, shape)
        assert result.rfunction.is_full
        assert result.pairing == pytest.approx(np.abs(result.coefficients).sum())
        assert field.pairing(result.rfunction.to_grid()) == pytest.approx(result.pairing, abs=1e-12)


def test_partial_parseval_is_monotone_and_bounded() -> None:
    """The partial sums grow with the level and stay below ||D_N - mean||_2^2."""
    field = DiscrepancyField(random_uniform(20, 2, seed=13))
    mean = float(np.sum(np.prod(1 - field.points, axis=1))) - field.n_points / 4
    variance = l2_squared_exact(field) - mean**2

    sums = [partial_parseval(field, level) for level in range(6)]
    assert all(later >= earlier for earlier, later in zip(sums, sums[1:]))
    assert sums[-1] <= variance + 1e-9


def test_l1_lower_bound_is_below_l2() -> None:
    """sum |cell integral| <= ||D_N||_1 <= ||D_N||_2."""
    field = DiscrepancyField(van_der_corput(6))
    assert 0 < field.l1_lower_bound((7, 7)) <= l2_norm_exact(field)
