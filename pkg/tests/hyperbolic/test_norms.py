"""Tests for the exact L^p, sup and Orlicz norms, and the square functions.

:Module: starlab.tests.hyperbolic.test_norms
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starlab.dyadic import DyadicInterval, GridFunction
from starlab.hyperbolic import (
    HaarExpansion,
    InvalidOrliczSpecError,
    OrliczSpec,
    directional_square_function,
    expansion_to_grid,
    littlewood_paley_probe,
    lp_growth_probe,
    lp_ladder,
    lp_norm,
    orlicz_exp_via_lp,
    orlicz_norm,
    random_haar_series,
    series_to_grid,
    square_function,
    sup_norm,
)


def indicator(measure_cells: int, level: int) -> GridFunction:
    """The indicator of the first `measure_cells` cells of a 1-d grid."""
    values = np.zeros(2**level)
    values[:measure_cells] = 1.0
    return GridFunction((level,), values)


def test_lp_norm_of_simple_functions() -> None:
    """Constants and indicators have closed-form norms."""
    assert lp_norm(GridFunction.constant((2, 2), -3.0), 4) == pytest.approx(3.0)
    assert lp_norm(indicator(2, 3), 2) == pytest.approx(0.5)
    assert lp_norm(indicator(2, 3), math.inf) == sup_norm(indicator(2, 3)) == 1.0
    assert lp_norm(GridFunction.zeros((2,)), 3) == 0.0

    with pytest.raises(ValueError):
        lp_norm(indicator(1, 2), 0.5)


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False), min_size=8, max_size=8), st.floats(min_value=1, max_value=50))
@settings(max_examples=50, deadline=None)
def test_lp_norm_is_monotone(values, p: float) -> None:
    """On a probability space ||g||_p <= ||g||_q <= ||g||_inf for p <= q."""
    grid = GridFunction((3,), np.array(values))
    lower, upper = lp_norm(grid, p), lp_norm(grid, 2 * p)
    assert lower <= upper * (1 + 1e-9) + 1e-300
    assert upper <= sup_norm(grid) * (1 + 1e-9) + 1e-300


@pytest.mark.parametrize("p", [1.0, 2.0, 3.5, 8.0])
def test_power_orlicz_is_lp(p: float) -> None:
    """psi(t) = t^p reproduces the L^p norm."""
    grid = GridFunction((2, 1), np.array([[0.5, -2.0], [1.0, 3.0], [0.0, 1.5], [-0.25, 4.0]]))
    assert orlicz_norm(grid, OrliczSpec.power(p), tol=1e-12) == pytest.approx(lp_norm(grid, p), rel=1e-9)


@pytest.mark.parametrize("alpha", [1.0, 2.0])
@pytest.mark.parametrize("cells", [1, 3, 8])
def test_exp_orlicz_of_an_indicator(alpha: float, cells: int) -> None:
    """For the indicator of a set of measure m, ||1_E||_exp(L^alpha) = log(1 + 1/m)^(-1/alpha)."""
    measure = cells / 8
    expected = math.log(1 + 1 / measure) ** (-1 / alpha)
    assert orlicz_norm(indicator(cells, 3), OrliczSpec.exp(alpha), tol=1e-12) == pytest.approx(expected, rel=1e-9)


def test_exp_minorant_for_small_alpha() -> None:
    """For alpha < 1 psi is linear up to the tangency point, continuous there, and convex overall."""
    spec = OrliczSpec.exp(0.5)
    tangent_point, slope = spec._tangent  # noqa
    assert tangent_point > (1 / 0.5 - 1) ** 2
    assert float(spec.psi(tangent_point * (1 - 1e-12))) == pytest.approx(math.expm1(math.sqrt(tangent_point)), rel=1e-6)
    assert float(spec.psi(tangent_point / 2)) == pytest.approx(slope * tangent_point / 2)

    t = np.linspace(0, 4 * tangent_point, 401)
    assert np.all(np.diff(spec.psi(t), 2) >= -1e-9)
    curve = np.expm1(np.sqrt(t))
    assert np.all(spec.psi(t) <= curve + 1e-12)
    np.testing.assert_allclose(spec.psi(t[t >= tangent_point]), curve[t >= tangent_point], rtol=1e-14)

    # Joining at the inflection point instead would break convexity: the chord there is steeper than the curve.
    inflection = (1 / 0.5 - 1) ** 2
    chord_slope = math.expm1(math.sqrt(inflection)) / inflection
    curve_slope = math.exp(math.sqrt(inflection)) * 0.5 / math.sqrt(inflection)
    assert chord_slope > curve_slope
    assert float(spec.psi(spec.inverse_of_one())) == pytest.approx(1.0)


def test_llogl_norm_is_between_l1_and_l2() -> None:
    """L log L sits between L^1 and any L^p with p > 1 up to constants; here it is at least the L^1 norm."""
    grid = GridFunction((3,), np.array([4.0, 0.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0]))
    norm = orlicz_norm(grid, OrliczSpec.llogl(1.0))
    assert lp_norm(grid, 1) <= norm <= sup_norm(grid)


def test_orlicz_spec_parsing() -> None:
    """Both the kind:parameter form and the short aliases."""
    assert OrliczSpec.parse("exp:2") == OrliczSpec.exp(2)
    assert OrliczSpec.parse("L4") == OrliczSpec.power(4)
    assert OrliczSpec.parse("LlogL0.5") == OrliczSpec.llogl(0.5)
    assert str(OrliczSpec.parse("POWER:3")) == "power:3"

    for bad in ("bogus:1", "exp:-1", "power:0.5", "L", "expL"):
        with pytest.raises(InvalidOrliczSpecError):
            OrliczSpec.parse(bad)


def test_lp_ladder_and_exp_estimate() -> None:
    """The ladder runs geometrically from 1 to pmax; the p^(-1/alpha) estimate of a +-1 function is its p = 1 rung."""
    ladder = lp_ladder(16, 4)
    assert ladder[0] == 1.0
    assert ladder[-1] == pytest.approx(16.0)
    assert len(ladder) == 17
    assert lp_ladder(1).tolist() == [1.0]

    signs = GridFunction((2,), np.array([1.0, -1.0, -1.0, 1.0]))
    assert orlicz_exp_via_lp(signs, 2.0) == pytest.approx(1.0)
    assert orlicz_exp_via_lp(GridFunction.zeros((2,)), 2.0) == 0.0


def test_lp_growth_probe_in_dimension_two() -> None:
    """Khintchine-type growth: ||F||_p / sqrt(p n) stays bounded for the full +1 sum."""
    probe = lp_growth_probe(HaarExpansion.constant_signs(6, 2), ladder=(2, 4, 8))
    assert [row.p for row in probe.rows] == [2.0, 4.0, 8.0]
    assert probe.rows[0].norm == pytest.approx(math.sqrt(7))
    assert 0 < probe.max_ratio < 3


def test_square_function_of_one_interval() -> None:
    """S(a h_I) = |a| chi_I, for scalar and vector coefficients."""
    interval = DyadicInterval(1, 1)
    assert square_function({interval: -3.0}).values.tolist() == [0.0, 0.0, 3.0, 3.0]
    assert square_function({interval: [3.0, 4.0]}).values.tolist() == [0.0, 0.0, 5.0, 5.0]
    assert series_to_grid({interval: 2.0}).values.tolist() == [0.0, 0.0, -2.0, 2.0]


def test_directional_square_function_of_the_full_sum() -> None:
    """Every shape of the full sum has its own level on each axis, so S = sqrt(n + 1) everywhere in d = 2."""
    expansion = HaarExpansion.constant_signs(4, 2)
    for axis in (0, 1):
        square = directional_square_function(expansion, axis)
        np.testing.assert_allclose(square.values, math.sqrt(5))
    assert lp_norm(expansion_to_grid(expansion), 2) == pytest.approx(lp_norm(square, 2))


def test_littlewood_paley_probe(rng: np.random.Generator) -> None:
    """The fitted constant of ||f||_p <= C sqrt(p) ||S f||_p is finite and of order one."""
    family = [random_haar_series(6, rng, gaussian=gaussian) for gaussian in (True, False, True)]
    probe = littlewood_paley_probe(family, ladder=(2, 4, 8))
    assert len(probe.rows) == 9
    assert 0 < probe.constant < 2
