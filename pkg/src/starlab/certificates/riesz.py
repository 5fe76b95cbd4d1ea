"""Riesz products in the plane

Psi = prod_j (1 + f_(j, n-j)) is built from r-functions whose shapes differ in the first coordinate, so every product of distinct
factors is, by the product rule, a signed Haar function of a rectangle of area below 2^-n. Each factor is 0 or 2, hence Psi >= 0,
and its expansion is 1 + (linear layer) + (finer terms), hence its mean is 1. Pairing Psi with a hyperbolic sum whose signs match
the factors picks out 2^-n times the sum of |alpha_R| and certifies a lower bound for the sup norm.

The factors run over all n + 1 shapes by default; `include_zero_shape=False` drops (0, n) and keeps j = 1..n.

Phi = prod_j (1 + gamma f_j) - 1 uses sign-optimal r-functions of a point set and certifies ||D_N||_inf >= <D_N, Phi> / ||Phi||_1.
The sine variant pairs D_N with sin(c F_2 / sqrt(n)), which is bounded by 1, and certifies a lower bound for ||D_N||_1.

:Module: starlab.certificates.riesz
"""
import math
import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from starlab.certificates.roth import ROUNDING_SLACK, CertificateViolationError, halasz_scale, roth_dual
from starlab.discrepancy import DiscrepancyField, lemma1_rfunction
from starlab.dyadic import GridFunction, ShapeVector, check_grid_budget, grid_haar_coefficients
from starlab.hyperbolic import HaarExpansion, InvalidExpansionError, RFunction, expansion_to_grid, hyperbolic_levels, rfunctions_of, shape_layer
from starlab.utils.logging import LOGGER

MAX_CLOSURE_SCALE = 6
RIESZ_VARIANTS = ("talagrand", "halasz", "sine")

FactorSigns = Union[HaarExpansion, Mapping[int, np.ndarray], int]


def factor_shapes(n: int, include_zero_shape: bool = True) -> List[ShapeVector]:
    """The shapes (j, n - j) of the Riesz factors: j = 0..n, or j = 1..n without the zero shape."""
    first = 0 if include_zero_shape else 1
    return [ShapeVector((j, n - j)) for j in range(first, n + 1)]


def riesz_factors(signs: FactorSigns, n: int, include_zero_shape: bool = True) -> List[RFunction]:
    """Full-sign r-functions for the factor shapes.

    Signs come from an expansion (sgn of its coefficients, zeros to +1), a mapping from j to a sign array of shape (2^j, 2^(n-j)), or
    one sign for every rectangle.
    """
    factors = []
    for shape in factor_shapes(n, include_zero_shape):
        j = shape.entries[0]
        if isinstance(signs, HaarExpansion):
            if signs.d != 2 or signs.n != n:
                raise InvalidExpansionError(f"Riesz factors at n={n} need a planar expansion at the same scale, got d={signs.d}, n={signs.n}")
            factors.append(RFunction.from_coefficients(shape, signs.coefficients(shape), zero_sign=1))
        elif isinstance(signs, Mapping):
            factors.append(RFunction.from_coefficients(shape, np.asarray(signs[j]), zero_sign=1))
        else:
            factors.append(RFunction(shape, np.full(shape.grid_shape, int(signs), dtype=np.int8)))
    return factors


def random_factor_signs(n: int, rng: np.random.Generator, include_zero_shape: bool = True) -> Dict[int, np.ndarray]:
    """Independent +-1 signs for every factor."""
    return {shape.entries[0]: rng.integers(0, 2, size=shape.grid_shape, dtype=np.int8) * 2 - 1 for shape in factor_shapes(n, include_zero_shape)}


@dataclass
class RieszProduct:
    """A planar Riesz-type test function: its r-function factors and the variant parameters.

    talagrand: prod (1 + f_j); halasz: prod (1 + gamma f_j) - 1; sine: sin(c (sum f_j) / sqrt(n)).
    """

    n: int
    factors: List[RFunction]
    variant: str = "talagrand"
    gamma: Optional[float] = None
    c: Optional[float] = None

    def __post_init__(self):
        if self.variant not in RIESZ_VARIANTS:
            raise InvalidExpansionError(f"Unknown Riesz variant: {self.variant}")
        if any(factor.shape.dimension != 2 or factor.shape.order != self.n for factor in self.factors):
            raise InvalidExpansionError(f"Riesz factors must be planar r-functions of order {self.n}")
        firsts = [factor.shape.entries[0] for factor in self.factors]
        if len(set(firsts)) != len(firsts):
            raise InvalidExpansionError("Riesz factors must have pairwise distinct first coordinates")
        if self.variant == "halasz" and self.gamma is None:
            raise InvalidExpansionError("The halasz variant needs gamma")
        if self.variant == "sine" and self.c is None:
            raise InvalidExpansionError("The sine variant needs c")

    def evaluate(self) -> GridFunction:
        """Exact values on the (n+1, n+1) grid."""
        if self.variant == "talagrand":
            return product_grid(self.factors, self.n)
        if self.variant == "halasz":
            return product_grid(self.factors, self.n, weight=self.gamma) - GridFunction.constant(hyperbolic_levels(self.n, 2), 1.0)

        linear = linear_layer(self.factors, self.n)
        root = math.sqrt(max(self.n, 1))
        return linear.map(lambda values: np.sin(self.c * values / root))


def linear_layer(factors: Sequence[RFunction], n: int) -> GridFunction:
    """sum of the factors on the (n+1, n+1) grid."""
    levels = hyperbolic_levels(n, 2)
    check_grid_budget(levels)
    values = np.zeros(tuple(2**level for level in levels), dtype=np.int64)
    for factor in factors:
        values = values + shape_layer(factor.shape, factor.signs, levels)
    return GridFunction(levels, values)


def product_grid(factors: Sequence[RFunction], n: int, weight: float = 1.0) -> GridFunction:
    """prod over the factors of (1 + weight * f) on the (n+1, n+1) grid. Integer valued when the weight is 1."""
    levels = hyperbolic_levels(n, 2)
    check_grid_budget(levels)

    integral = weight == 1.0
    values = np.ones(tuple(2**level for level in levels), dtype=np.int64 if integral else float)
    for factor in factors:
        layer = shape_layer(factor.shape, factor.signs, levels).astype(values.dtype)
        values = values * (1 + layer) if integral else values * (1.0 + weight * layer)
    return GridFunction(levels, values)


@dataclass
class RieszCertificate:
    """The checks on Psi: min >= 0, mean = 1 and ||Psi||_1 = 1."""

    n: int
    factors: int
    minimum: float
    mean: float
    l1: float
    grid: GridFunction = dataclasses.field(repr=False)

    @property
    def holds(self) -> bool:
        """All three checks pass (mean and L1 to 1e-12)."""
        return self.minimum >= 0 and abs(self.mean - 1) <= 1e-12 and abs(self.l1 - 1) <= 1e-12

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return {"variant": "talagrand", "n": self.n, "factors": self.factors, "min": self.minimum, "mean": self.mean, "l1": self.l1, "holds": self.holds}


def riesz_talagrand(signs: FactorSigns, n: int, include_zero_shape: bool = True, raise_on_violation: bool = True) -> RieszCertificate:
    """Psi on the (n+1)-grid with its certificate."""
    factors = riesz_factors(signs, n, include_zero_shape)
    grid = RieszProduct(n, factors).evaluate()

    certificate = RieszCertificate(n, len(factors), float(grid.values.min()), grid.mean(), float(np.abs(grid.values).sum()) * grid.cell_volume, grid)
    LOGGER.debug(f"[🧾] Psi at n={n} with {len(factors)} factors: min {certificate.minimum:g}, mean {certificate.mean!r}")
    if not certificate.holds and raise_on_violation:
        raise CertificateViolationError(f"[💥] The Riesz product at n={n} fails its certificate: {certificate.to_dict()}")

    return certificate


@dataclass
class RieszSupport:
    """E = {Psi > 0}, where every factor equals 2, so that Psi = 2^k 1_E and |E| = 2^-k."""

    mask: GridFunction
    measure: float
    expected: float


def riesz_support(signs: FactorSigns, n: int, include_zero_shape: bool = True) -> RieszSupport:
    """The support of Psi and its measure."""
    factors = riesz_factors(signs, n, include_zero_shape)
    grid = RieszProduct(n, factors).evaluate()
    mask = grid.map(lambda values: (values > 0).astype(np.int8))
    return RieszSupport(mask, mask.integral(), 2.0 ** -len(factors))


def duality_pair(expansion: HaarExpansion, psi: Union[GridFunction, RieszCertificate]) -> float:
    """Exact <sum alpha_R h_R, Psi>; coarse terms of the expansion are orthogonal to Psi and contribute nothing."""
    grid = psi.grid if isinstance(psi, RieszCertificate) else psi
    return expansion_to_grid(expansion).inner(grid)


def talagrand_lower_bound(expansion: HaarExpansion, include_zero_shape: bool = True) -> float:
    """2^-n sum |alpha_R| over the factor shapes, which <F, Psi> equals when Psi's signs follow sgn(alpha_R); a lower bound for sup|F|."""
    shapes = factor_shapes(expansion.n, include_zero_shape)
    return 2.0**-expansion.n * float(sum(np.abs(expansion.coefficients(shape)).sum() for shape in shapes))


@dataclass
class ClosureReport:
    """Haar coefficients of Psi that must vanish (or match the linear layer) by the product rule."""

    n: int
    checked: int
    max_violation: float

    @property
    def holds(self) -> bool:
        """Every checked coefficient is as predicted to 1e-12."""
        return self.max_violation <= 1e-12


def riesz_closure_check(signs: FactorSigns, n: int, include_zero_shape: bool = True) -> ClosureReport:
    """Checks that Psi - 1 - (linear layer) has no Haar coefficient on rectangles of area >= 2^-n, and that Psi's own coefficients at area
    2^-n are those of the linear layer (zero on shapes that are not factors)."""
    if n > MAX_CLOSURE_SCALE:
        raise InvalidExpansionError(f"The closure check is bounded to n <= {MAX_CLOSURE_SCALE}, got n={n}")

    factors = riesz_factors(signs, n, include_zero_shape)
    psi = product_grid(factors, n)
    linear = {factor.shape: factor.signs for factor in factors}
    levels = psi.levels

    higher = psi.values.astype(float) - 1.0
    for factor in factors:
        higher = higher - shape_layer(factor.shape, factor.signs, levels)
    remainder = GridFunction(levels, higher)

    violation = abs(remainder.mean())
    checked = 1
    for shape in ShapeVector.all_up_to_order(n, 2):
        violation = max(violation, float(np.abs(grid_haar_coefficients(remainder, shape)).max()))
        checked += shape.cardinality
        if shape.order == n:
            expected = linear.get(shape, np.zeros(shape.grid_shape)) * 2.0**-n
            violation = max(violation, float(np.abs(grid_haar_coefficients(psi, shape) - expected).max()))
            checked += shape.cardinality

    return ClosureReport(n, checked, violation)


@dataclass
class HalaszReport:
    """<D_N, Phi> split into its linear term and the higher-order remainder, with the certified sup-norm bound."""

    n: int
    gamma: float
    factors: int
    pairing: float
    linear: float
    remainder: float
    mean: float
    sup: float
    sup_bound: float
    l1: float
    lower_bound: float
    grid: GridFunction = dataclasses.field(repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return {
            "variant": "halasz",
            "n": self.n,
            "gamma": self.gamma,
            "factors": self.factors,
            "pairing": self.pairing,
            "linear": self.linear,
            "remainder": self.remainder,
            "mean": self.mean,
            "sup": self.sup,
            "sup_bound": self.sup_bound,
            "l1": self.l1,
            "lower_bound": self.lower_bound,
        }


def riesz_halasz(field: DiscrepancyField, gamma: float = 0.1, n: Optional[int] = None, include_zero_shape: bool = True) -> HalaszReport:
    """Phi = prod_j (1 + gamma f_j) - 1 with the sign-optimal r-functions of the point set, at n = ceil(1 + log2 N) by default."""
    if field.dimension != 2:
        raise InvalidExpansionError(f"The Halasz product is planar, got d={field.dimension}")
    if not 0 <= gamma <= 1:
        raise InvalidExpansionError(f"gamma must be in [0, 1], got {gamma}")

    n = halasz_scale(field.n_points) if n is None else n
    optimal = [lemma1_rfunction(field, shape) for shape in factor_shapes(n, include_zero_shape)]
    factors = [result.rfunction for result in optimal]

    phi = RieszProduct(n, factors, "halasz", gamma=gamma).evaluate()
    pairing = field.pairing(phi)
    linear = gamma * math.fsum(result.pairing for result in optimal)
    l1 = float(np.abs(phi.values).sum()) * phi.cell_volume

    report = HalaszReport(
        n=n,
        gamma=gamma,
        factors=len(factors),
        pairing=pairing,
        linear=linear,
        remainder=pairing - linear,
        mean=phi.mean(),
        sup=phi.abs_max(),
        sup_bound=(1 + gamma) ** len(factors) - 1,
        l1=l1,
        lower_bound=pairing / l1 if l1 > 0 else 0.0,
        grid=phi,
    )
    if report.sup > report.sup_bound * (1 + ROUNDING_SLACK) + ROUNDING_SLACK:
        raise CertificateViolationError(f"[💥] ||Phi||_inf = {report.sup!r} is over (1 + gamma)^k - 1 = {report.sup_bound!r}")

    LOGGER.debug(f"[🧾] Phi for {field!r} at n={n}, gamma={gamma}: pairing {pairing:.6g} (linear {linear:.6g})")
    return report


@dataclass
class SineReport:
    """<D_N, sin(c F_2 / sqrt(n))>, a lower bound for ||D_N||_1, and the first-order slope <D_N, F_2> / sqrt(n)."""

    n: int
    c: float
    value: float
    slope: float

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return {"variant": "sine", "n": self.n, "c": self.c, "pairing": self.value, "lower_bound": self.value, "slope": self.slope}


def halasz_sine(field: DiscrepancyField, c: float = 0.1, n: Optional[int] = None) -> SineReport:
    """Pairs D_N with sin(c F_2 / sqrt(n)), F_2 the sign-optimal Roth dual; the pairing is exact."""
    if field.dimension != 2:
        raise InvalidExpansionError(f"The sine certificate is planar, got d={field.dimension}")
    if not 0 < c < 1:
        raise InvalidExpansionError(f"c must be in (0, 1), got {c}")

    n = halasz_scale(field.n_points) if n is None else n
    factors = rfunctions_of(roth_dual(field, n, 2))
    value = field.pairing(RieszProduct(n, factors, "sine", c=c).evaluate())
    return SineReport(n, c, value, field.pairing(linear_layer(factors, n)) / math.sqrt(max(n, 1)))
