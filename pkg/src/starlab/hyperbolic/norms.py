"""Exact norms of piecewise-constant functions: L^p, L-infinity and Orlicz

Every function handled here is a GridFunction, so each integral is a finite sum over cells and the only approximation is the
bisection that locates an Orlicz norm.

Orlicz generators:
  - power p:   psi(t) = t^p
  - exp alpha: psi(t) = e^(t^alpha) - 1. For alpha < 1 this is not convex near 0, so it is replaced by its convex minorant: the
               chord from the origin up to the point t* where that chord is tangent to the curve, and the curve itself after t*.
               t* lies past the inflection point (1/alpha - 1)^(1/alpha); the two agree for large t.
  - LlogL beta: psi(t) = t * ln^beta(e + t)
Any two generators that agree for large t give equivalent norms, so only factor-stable claims are tested against these.

:Module: starlab.hyperbolic.norms
"""
import math
import re
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect, brentq

from starlab.dyadic import GridFunction
from starlab.hyperbolic.expansion import HaarExpansion, expansion_to_grid
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER

BRACKET_FACTOR = 2.0**20
ORLICZ_KINDS = ("power", "exp", "llogl")


class InvalidOrliczSpecError(ValueError):
    """Raised for an unknown Orlicz kind or a parameter out of range."""


@dataclass(frozen=True)
class OrliczSpec:
    """The generating function psi of an Orlicz space: kind plus its positive parameter."""

    kind: str
    parameter: float
    _tangent: Optional[Tuple[float, float]] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ORLICZ_KINDS:
            raise InvalidOrliczSpecError(f"Unknown Orlicz kind: {self.kind}. Pick one of {', '.join(ORLICZ_KINDS)}")
        if not self.parameter > 0 or not math.isfinite(self.parameter):
            raise InvalidOrliczSpecError(f"The Orlicz parameter must be a positive real, got {self.parameter}")
        if self.kind == "power" and self.parameter < 1:
            raise InvalidOrliczSpecError(f"L^p needs p >= 1, got {self.parameter}")

        if self.kind == "exp" and self.parameter < 1:
            object.__setattr__(self, "_tangent", _exp_minorant_tangent(self.parameter))

    @classmethod
    def power(cls, p: float) -> "OrliczSpec":
        """L^p"""
        return cls("power", float(p))

    @classmethod
    def exp(cls, alpha: float) -> "OrliczSpec":
        """exp(L^alpha).

        For alpha < 1 the generator is linear up to the tangency point t*, not up to the inflection point t0 = (1/alpha - 1)^(1/alpha):
        the chord from the origin to the curve at t0 is steeper than the curve there, so joining at t0 would not be convex.
        """
        return cls("exp", float(alpha))

    @classmethod
    def llogl(cls, beta: float) -> "OrliczSpec":
        """L (log L)^beta"""
        return cls("llogl", float(beta))

    @classmethod
    def parse(cls, text: str) -> "OrliczSpec":
        """Parses `power:4`, `exp:2`, `llogl:0.5` (also `L4`, `expL2` and `LlogL0.5`)."""
        cleaned = text.strip()
        match = re.fullmatch(r"(power|exp|llogl):([0-9.eE+-]+)", cleaned, flags=re.IGNORECASE)
        if not match:
            match = re.fullmatch(r"(L|expL|LlogL)([0-9.eE+-]+)", cleaned)
            aliases = {"L": "power", "expL": "exp", "LlogL": "llogl"}
            if not match:
                raise InvalidOrliczSpecError(f"Cannot parse the Orlicz spec: {text!r}")
            kind = aliases[match.group(1)]
        else:
            kind = match.group(1).lower()

        try:
            return cls(kind, float(match.group(2)))
        except ValueError as exc:
            raise InvalidOrliczSpecError(f"Cannot parse the Orlicz spec: {text!r}") from exc

    def __str__(self) -> str:
        return f"{self.kind}:{self.parameter:g}"

    def psi(self, t: np.ndarray) -> np.ndarray:
        """Vectorized generating function on t >= 0 (overflows to inf, never to nan)."""
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            if self.kind == "power":
                return np.power(t, self.parameter)

            if self.kind == "llogl":
                return t * np.power(np.log(np.e + t), self.parameter)

            curve = np.expm1(np.power(t, self.parameter))
            if self._tangent is None:
                return curve
            tangent_point, slope = self._tangent
            return np.where(t < tangent_point, slope * t, curve)

    def inverse_of_one(self) -> float:
        """psi^-1(1), which scales the Orlicz bisection bracket."""
        if self.kind == "power":
            return 1.0
        if self.kind == "exp" and self._tangent is None:
            return math.log(2.0) ** (1.0 / self.parameter)

        high = 1.0
        while float(self.psi(high)) < 1.0:
            high *= 2.0
        return float(brentq(lambda t: float(self.psi(t)) - 1.0, 0.0, high, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def _exp_minorant_tangent(alpha: float) -> Tuple[float, float]:
    """For e^(t^alpha) - 1 with alpha < 1: the point t* where the chord from 0 is tangent, and the chord slope.

    With u = t^alpha the tangency condition is alpha * u * e^u = e^u - 1, which changes sign between the inflection u = 1/alpha - 1
    and u = 1/alpha.
    """
    inflection = 1.0 / alpha - 1.0
    root = brentq(lambda u: alpha * u * math.exp(u) - math.expm1(u), inflection, 1.0 / alpha)
    tangent_point = root ** (1.0 / alpha)
    return tangent_point, math.expm1(root) / tangent_point


def sup_norm(g: GridFunction) -> float:
    """max over cells of |g|"""
    return g.abs_max()


def lp_norm(g: GridFunction, p: float) -> float:
    """(2^-(sum m) * sum_c |g_c|^p)^(1/p); p = inf gives the sup norm."""
    if math.isinf(p):
        return sup_norm(g)
    if not p >= 1:
        raise ValueError(f"L^p norms need p >= 1, got {p}")

    scale = g.abs_max()
    if scale == 0.0:
        return 0.0

    # Factoring out the max keeps large p from overflowing:
    normalized = np.abs(g.values, dtype=float) / scale
    return scale * float(np.mean(np.power(normalized, p))) ** (1.0 / p)


def value_distribution(g: GridFunction) -> Tuple[np.ndarray, np.ndarray]:
    """The distinct values of |g| and the measure of the set where each is taken."""
    values, counts = np.unique(np.abs(g.values, dtype=float), return_counts=True)
    return values, counts * g.cell_volume


def orlicz_norm(g: GridFunction, spec: OrliczSpec, tol: Optional[float] = None) -> float:
    """inf{K > 0 : integral of psi(|g|/K) <= 1}, by bisection to the relative tolerance (default: OrliczTolerance).

    The integral is decreasing in K, so the bracket [s * 2^-20, s * 2^20] with s = sup|g| / psi^-1(1) is widened geometrically
    until it straddles the level 1. It always does: at K = s the integral is at most 1.
    """
    tol = STARLAB_CONFIGURATION.settings["orlicz_tolerance"] if tol is None else tol
    if not tol > 0:
        raise ValueError(f"The Orlicz tolerance must be positive, got {tol}")

    values, weights = value_distribution(g)
    if values[-1] == 0.0:
        return 0.0

    def excess(scale: float) -> float:
        return float(np.dot(weights, spec.psi(values / scale))) - 1.0

    base = values[-1] / spec.inverse_of_one()
    low, high = base / BRACKET_FACTOR, base * BRACKET_FACTOR
    while excess(low) <= 0.0:
        LOGGER.debug(f"[📏] Widening the Orlicz bracket below {low:g}...")
        low /= BRACKET_FACTOR
    while excess(high) > 0.0:
        high *= BRACKET_FACTOR
    if excess(high) == 0.0:
        return high

    return float(bisect(excess, low, high, xtol=base * 1e-300 + np.finfo(float).tiny, rtol=max(tol, 4 * np.finfo(float).eps), maxiter=2000))


def lp_ladder(pmax: float, points_per_octave: int = 4) -> np.ndarray:
    """Geometric ladder of exponents from 1 to pmax."""
    if pmax < 1:
        raise ValueError(f"pmax must be at least 1, got {pmax}")
    count = max(2, int(math.ceil(points_per_octave * math.log2(pmax))) + 1) if pmax > 1 else 1
    return np.geomspace(1.0, pmax, count)


def orlicz_exp_via_lp(g: GridFunction, alpha: float, pmax: float = 64.0) -> float:
    """max over a geometric ladder of p in [1, pmax] of p^(-1/alpha) * ||g||_p.

    An estimate of the exp(L^alpha) norm up to constants. The p = 1 rung stands for the limit p -> 1+.
    """
    if not alpha > 0:
        raise InvalidOrliczSpecError(f"alpha must be positive, got {alpha}")
    if g.abs_max() == 0.0:
        return 0.0
    return max(p ** (-1.0 / alpha) * lp_norm(g, p) for p in lp_ladder(pmax))


class GrowthRow(NamedTuple):
    """One rung of an L^p growth probe."""

    p: float
    norm: float
    ratio: float


@dataclass
class GrowthProbe:
    """||F||_p against p^((d-1)/2) * n^((d-1)/2) over a ladder of exponents."""

    d: int
    n: int
    rows: List[GrowthRow]

    @property
    def max_ratio(self) -> float:
        """The constant the probe supports."""
        return max(row.ratio for row in self.rows)


def lp_growth_probe(expansion: HaarExpansion, ladder: Sequence[float] = (2, 4, 8, 16), grid: Optional[GridFunction] = None) -> GrowthProbe:
    """Exact L^p norms of a hyperbolic sum over the ladder, each divided by the predicted growth p^((d-1)/2) n^((d-1)/2).

    n = 0 is normalized as n = 1.
    """
    grid = expansion_to_grid(expansion) if grid is None else grid
    exponent = (expansion.d - 1) / 2.0
    rows = []
    for p in ladder:
        norm = lp_norm(grid, float(p))
        rows.append(GrowthRow(float(p), norm, norm / (float(p) ** exponent * max(expansion.n, 1) ** exponent)))
        LOGGER.debug(f"[📈] p={p:g}: ||F||_p = {norm:.6g}")

    return GrowthProbe(expansion.d, expansion.n, rows)
