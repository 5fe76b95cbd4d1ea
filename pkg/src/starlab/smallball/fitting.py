"""Power-law exponent fits and linear trends

value ~ C * n^exponent, fitted by least squares on log value against log n; linear trends by plain least squares.

:Module: starlab.smallball.fitting
"""
import math
from typing import Any, Dict, NamedTuple, Sequence

import numpy as np
from scipy.stats import linregress


class DegenerateFitError(ValueError):
    """Raised when a fit has fewer than two distinct abscissae or a nonpositive value."""


class ExponentFit(NamedTuple):
    """The fitted exponent (the log-log slope), the intercept log C and C itself, the slope's standard error and r^2."""

    exponent: float
    intercept: float
    constant: float
    stderr: float
    r_squared: float

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return self._asdict()


def exponent_fit(ns: Sequence[float], values: Sequence[float]) -> ExponentFit:
    """Fits value = C * n^exponent."""
    ns = np.asarray(ns, dtype=float)
    values = np.asarray(values, dtype=float)
    if ns.shape != values.shape:
        raise DegenerateFitError(f"{ns.size} abscissae against {values.size} values")
    if ns.size < 3 or np.unique(ns).size < 2:
        raise DegenerateFitError(f"An exponent fit needs at least three points and two distinct values of n, got n = {ns.tolist()}")
    if np.any(ns <= 0) or np.any(values <= 0):
        raise DegenerateFitError("An exponent fit needs positive n and positive values")

    result = linregress(np.log(ns), np.log(values))
    stderr = float(result.stderr)
    return ExponentFit(float(result.slope), float(result.intercept), math.exp(result.intercept), stderr, float(result.rvalue) ** 2)


class LinearFit(NamedTuple):
    """y = slope * x + intercept with the slope's standard error and r^2."""

    slope: float
    intercept: float
    stderr: float
    r_squared: float

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return self._asdict()


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> LinearFit:
    """Least-squares line through the points, for trends such as ||D_N||_2 against sqrt(log2 N)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise DegenerateFitError(f"{xs.size} abscissae against {ys.size} values")
    if xs.size < 3 or np.unique(xs).size < 2:
        raise DegenerateFitError(f"A trend fit needs at least three points and two distinct abscissae, got {xs.tolist()}")

    result = linregress(xs, ys)
    return LinearFit(float(result.slope), float(result.intercept), float(result.stderr), float(result.rvalue) ** 2)
