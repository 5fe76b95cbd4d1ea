"""Tests for the Haar functions and the product rule.

:Module: starlab.tests.dyadic.test_haar
"""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from starlab.dyadic import (
    DimensionMismatchError,
    DyadicDomainError,
    DyadicInterval,
    DyadicRectangle,
    NotApplicable,
    ShapeVector,
    grid_haar_coefficients,
    haar_eval,
    haar_eval_rect,
    haar_function,
    haar_values,
    product_rule,
    to_grid,
)


def test_haar_eval() -> None:
    """-1 on the left half, +1 on the right half, 0 elsewhere."""
    interval = DyadicInterval(1, 1)
    assert haar_eval(interval, 0.5) == -1
    assert haar_eval(interval, 0.75) == 1
    assert haar_eval(interval, 0.25) == 0

    assert list(haar_values(interval, np.array([0.1, 0.6, 0.8]))) == [0, -1, 1]

    with pytest.raises(DyadicDomainError):
        haar_eval(interval, 1.0)


def test_haar_eval_rect() -> None:
    """The tensor product of the per-axis values."""
    rect = DyadicRectangle.from_levels((0, 1), (0, 0))
    assert haar_eval_rect(rect, (0.2, 0.1)) == 1
    assert haar_eval_rect(rect, (0.7, 0.1)) == -1
    assert haar_eval_rect(rect, (0.7, 0.6)) == 0

    with pytest.raises(DimensionMismatchError):
        haar_eval_rect(rect, (0.1,))


def test_haar_orthogonality() -> None:
    """<h_R, h_R'> = |R| when equal, 0 otherwise, exactly on a fine enough grid."""
    rectangles = [rect for shape in ShapeVector.all_up_to_order(2, 2) for rect in shape.rectangles()]
    grids = [to_grid(haar_function(rect), (3, 3)) for rect in rectangles]
    for index, (rect, grid) in enumerate(zip(rectangles, grids)):
        assert grid.inner(grid) == rect.volume
        assert grid.integral() == 0
        for other in grids[index + 1:]:
            assert grid.inner(other) == 0


def test_product_rule_in_two_dimensions() -> None:
    """h_R h_R' = +-h_{R cap R'} for distinct meeting rectangles of equal volume, checked pointwise."""
    n = 3
    rectangles = [rect for shape in ShapeVector.all_of_order(n, 2) for rect in shape.rectangles()]
    for first in rectangles:
        first_grid = to_grid(haar_function(first), (n + 1, n + 1))
        for second in rectangles:
            result = product_rule(first, second)
            if first == second or first.is_disjoint(second):
                assert result is NotApplicable
                continue
            product = first_grid * to_grid(haar_function(second), (n + 1, n + 1))
            expected = to_grid(haar_function(result.rect), (n + 1, n + 1)) * result.sign
            assert np.array_equal(product.values, expected.values)


def test_product_rule_not_applicable() -> None:
    """Different volumes, a shared side length in three dimensions and a disjoint pair all yield the sentinel."""
    assert product_rule(DyadicRectangle.from_levels((1, 0), (0, 0)), DyadicRectangle.from_levels((0, 2), (0, 0))) is NotApplicable
    assert product_rule(DyadicRectangle.from_levels((1, 1, 0), (0, 0, 0)), DyadicRectangle.from_levels((1, 0, 1), (0, 0, 0))) is NotApplicable
    assert product_rule(DyadicRectangle.from_levels((1, 0), (0, 0)), DyadicRectangle.from_levels((0, 1), (0, 0))) is not NotApplicable
    assert not NotApplicable


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3), st.data())
def test_grid_haar_coefficients_match_inner_products(first: int, second: int, data: st.DataObject) -> None:
    """The block-sum coefficients equal the plain inner products with each Haar function."""
    rng = np.random.default_rng(data.draw(st.integers(min_value=0, max_value=2**32)))
    levels = (first + 1, second + 1)
    values = rng.integers(-5, 6, size=(2 ** levels[0], 2 ** levels[1])).astype(float)
    grid = to_grid(lambda x, y: values, levels)

    shape = ShapeVector((first, second))
    coefficients = grid_haar_coefficients(grid, shape)
    for rect in shape.rectangles():
        assert coefficients[rect.position] == pytest.approx(grid.inner(to_grid(haar_function(rect), levels)), abs=1e-12)
