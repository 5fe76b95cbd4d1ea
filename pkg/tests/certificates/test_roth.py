"""Tests for Roth's dual function and the L2 chain.

:Module: starlab.tests.certificates.test_roth
"""
import math
from unittest import mock

import numpy as np
import pytest

from starlab.certificates import CertificateViolationError, chain_verify, halasz_scale, roth_dual
from starlab.discrepancy import DiscrepancyField, l2_norm_exact
from starlab.dyadic import ShapeVector
from starlab.hyperbolic import HaarExpansion, InvalidExpansionError, expansion_to_grid, lp_norm
from starlab.point_sets import random_uniform, van_der_corput


@pytest.mark.parametrize("n_points, expected", [(1, 1), (2, 2), (8, 4), (9, 5), (1024, 11)])
def test_halasz_scale(n_points: int, expected: int) -> None:
    """n = ceil(1 + log2 N)"""
    assert halasz_scale(n_points) == expected


def test_roth_dual_sources(rng: np.random.Generator) -> None:
    """Signs from a point set, an expansion, a mapping or a single sign all give full +-1 sums."""
    field = DiscrepancyField(van_der_corput(4))
    from_field = roth_dual(field, 5)
    assert lp_norm(expansion_to_grid(from_field), 2) == pytest.approx(math.sqrt(6))

    gaussian = HaarExpansion.random_gaussian(3, 3, rng)
    from_expansion = roth_dual(gaussian, 3)
    for shape in from_expansion.shapes:
        np.testing.assert_array_equal(from_expansion.coefficients(shape), np.sign(gaussian.coefficients(shape)))

    mapping = {shape: -np.ones(shape.grid_shape) for shape in ShapeVector.all_of_order(2, 2)}
    np.testing.assert_array_equal(expansion_to_grid(roth_dual(mapping, 2, 2)).values, expansion_to_grid(roth_dual(-1, 2, 2)).values)


def test_roth_dual_errors() -> None:
    """Explicit signs need the dimension, every shape and a +-1 value."""
    with pytest.raises(InvalidExpansionError):
        roth_dual(1, 3)
    with pytest.raises(InvalidExpansionError):
        roth_dual(0, 3, 2)
    with pytest.raises(InvalidExpansionError):
        roth_dual({ShapeVector((1, 1)): np.ones((2, 2))}, 2, 2)
    with pytest.raises(InvalidExpansionError):
        roth_dual(DiscrepancyField(van_der_corput(3)), 3, 3)


@pytest.mark.parametrize("pointset", [van_der_corput(k) for k in range(1, 7)] + [random_uniform(50, 2, seed=1), random_uniform(30, 3, seed=2)])
def test_chain_holds(pointset) -> None:
    """<D_N, F> / ||F||_2 never exceeds ||D_N||_2."""
    field = DiscrepancyField(pointset)
    report = chain_verify(field)
    assert report.holds
    assert report.n == halasz_scale(pointset.n_points)
    assert report.lower_bound == pytest.approx(report.pairing / report.dual_l2)
    assert report.exact_l2 == l2_norm_exact(field)
    assert report.to_dict()["holds"] is True


def test_chain_pairing_is_exact() -> None:
    """The summed sign-optimal pairings equal the exact pairing of D_N with the dual function."""
    field = DiscrepancyField(van_der_corput(5))
    report = chain_verify(field, n=4)
    assert report.pairing == pytest.approx(field.pairing(expansion_to_grid(roth_dual(field, 4))), abs=1e-10)


def test_chain_violation_raises() -> None:
    """A bound above the exact norm is a violation."""
    field = DiscrepancyField(van_der_corput(4))
    with mock.patch("starlab.certificates.roth.l2_norm_exact", return_value=0.0):
        with pytest.raises(CertificateViolationError):
            chain_verify(field)

        report = chain_verify(field, raise_on_violation=False)
        assert not report.holds
