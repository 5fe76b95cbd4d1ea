"""Tests for the discrepancy function and its exact pairings.

:Module: starlab.tests.discrepancy.test_field
"""
# pylint: disable=unused-argument
from typing import Any, Dict

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from starlab.discrepancy import DiscrepancyField, critical_grid, haar_coefficient, haar_coefficients
from starlab.dyadic import DimensionMismatchError, DyadicDomainError, GridFunction, ShapeVector, haar_function, to_grid
from starlab.point_sets import PointSet, random_uniform, van_der_corput

points_strategy = st.lists(
    st.tuples(st.floats(min_value=0, max_value=1, exclude_max=True), st.floats(min_value=0, max_value=1, exclude_max=True)), min_size=1, max_size=12
)


def test_eval_uses_open_boxes() -> None:
    """A point on the boundary of [0,x) is not counted."""
    field = DiscrepancyField(PointSet([[0.5, 0.5]]))
    assert field.eval((0.75, 0.75)) == pytest.approx(1 - 0.5625)
    assert field.eval((0.5, 0.5)) == pytest.approx(-0.25)
    assert field.eval((1.0, 1.0)) == 0.0
    assert field.eval((0.0, 0.3)) == 0.0

    with pytest.raises(DimensionMismatchError):
        field.eval((0.5,))
    with pytest.raises(DyadicDomainError):
        field.eval((0.5, 1.5))


@given(points_strategy, st.data())
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_counting_table_matches_direct_counts(test_configuration: Dict[str, Any], points, data: st.DataObject) -> None:
    """The occupancy table and the direct count agree, including queries that sit on point coordinates."""
    from starlab.utils.configuration import STARLAB_CONFIGURATION

    pointset = PointSet(points)
    coordinates = [value for point in points for value in point] + [0.0, 1.0]
    queries = np.array(data.draw(st.lists(st.tuples(st.sampled_from(coordinates), st.sampled_from(coordinates)), min_size=1, max_size=20)))

    expected = np.array([sum(1 for point in points if point[0] < x and point[1] < y) for x, y in queries])
    tabled = DiscrepancyField(pointset).count_open(queries)

    STARLAB_CONFIGURATION.override(counting_table_budget=1)
    direct = DiscrepancyField(pointset).count_open(queries)
    STARLAB_CONFIGURATION.override(counting_table_budget=2**24)

    assert tabled.tolist() == expected.tolist()
    assert direct.tolist() == expected.tolist()


def test_grid_values_on_and_off_the_table(test_configuration: Dict[str, Any]) -> None:
    """The grid evaluation is the same with and without the counting table."""
    from starlab.utils.configuration import STARLAB_CONFIGURATION

    pointset = random_uniform(40, 2, seed=5)
    tabled = DiscrepancyField(pointset).grid_values((4, 3))

    STARLAB_CONFIGURATION.override(counting_table_budget=1)
    direct = DiscrepancyField(pointset).grid_values((4, 3))
    np.testing.assert_allclose(tabled.values, direct.values)
    assert tabled.values[0, 0] == pytest.approx(DiscrepancyField(pointset).eval((1 / 32, 1 / 16)))


@pytest.mark.parametrize("pointset", [van_der_corput(4), random_uniform(30, 2, seed=3), random_uniform(15, 3, seed=4)], ids=["vdc", "random2", "random3"])
def test_haar_coefficients_agree(pointset: PointSet) -> None:
    """The closed-form coefficient, the per-shape array and the exact pairing with h_R all agree."""
    field = DiscrepancyField(pointset)
    d = pointset.dimension
    for shape in ShapeVector.all_up_to_order(2, d):
        levels = tuple(entry + 1 for entry in shape.entries)
        coefficients = haar_coefficients(field, shape)
        for rect in shape.rectangles():
            single = haar_coefficient(field, rect)
            assert coefficients[rect.position] == pytest.approx(single, abs=1e-12)
            assert field.pairing(to_grid(haar_function(rect), levels)) == pytest.approx(single, abs=1e-12)


def test_cell_integrals_pair_exactly(rng: np.random.Generator) -> None:
    """Pairing against the exact cell averages gives the same <D_N, g> as the suffix-sum pairing."""
    field = DiscrepancyField(random_uniform(25, 2, seed=9))
    g = GridFunction((3, 2), rng.standard_normal((8, 4)))

    averages = field.cell_integrals((3, 2))
    assert averages.inner(g) == pytest.approx(field.pairing(g), abs=1e-10)

    # The integral of D_N is sum_p prod (1 - p_j) - N / 2^d:
    expected_mean = float(np.sum(np.prod(1 - field.points, axis=1))) - field.n_points / 4
    assert averages.integral() == pytest.approx(expected_mean, abs=1e-12)
    assert field.pairing(GridFunction.constant((0, 0), 1.0)) == pytest.approx(expected_mean, abs=1e-12)


def test_critical_grid_adds_one() -> None:
    """The critical grid holds the distinct coordinates and 1."""
    field = DiscrepancyField(PointSet([[0.5, 0.25], [0.5, 0.0]]))
    first, second = critical_grid(field)
    assert first.tolist() == [0.5, 1.0]
    assert second.tolist() == [0.0, 0.25, 1.0]
    assert "N=2" in repr(field)
