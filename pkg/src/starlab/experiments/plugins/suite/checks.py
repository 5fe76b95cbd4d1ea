"""The acceptance checks run by the suite

Every check measures one number and compares it against its tolerance: `max` checks pass when the measurement is below the tolerance,
`min` checks when it is above. Quick mode runs each check on fewer and smaller cases.

:Module: starlab.experiments.plugins.suite.checks
"""
import math
import zlib
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Sequence

import numpy as np

from starlab.certificates import chain_verify, duality_pair, halasz_sine, riesz_talagrand, talagrand_lower_bound, beck_gain_sum
from starlab.discrepancy import (
    DiscrepancyField,
    haar_coefficient,
    haar_coefficients,
    l2_norm_exact,
    lemma1_rfunction,
    lp_norm_sampled,
    orlicz_norm_sampled,
    star_discrepancy_exact,
)
from starlab.dyadic import DyadicRectangle, GridFunction, ShapeVector, haar_function, product_rule, to_grid
from starlab.hyperbolic import (
    HaarExpansion,
    OrliczSpec,
    RFunction,
    count_rectangles,
    expansion_to_grid,
    littlewood_paley_probe,
    lp_norm,
    orlicz_norm,
    random_haar_series,
    rectangle_enumeration,
)
from starlab.point_sets import PointSet, best_shift, random_uniform, shifted_van_der_corput, van_der_corput
from starlab.smallball import branch_and_bound, exhaustive_min, exponent_fit, linear_fit, local_search, mc_expectation

CHECK_KINDS = ("max", "min")


@dataclass
class SuiteContext:
    """What every check gets: quick mode and the suite seed."""

    quick: bool
    seed: int

    def rng(self, name: str) -> np.random.Generator:
        """A generator of its own for every check, so that running a subset does not change the draws."""
        return np.random.default_rng([self.seed, zlib.crc32(name.encode("utf-8"))])

    def pick(self, quick, full):
        """The quick or the full parameter."""
        return quick if self.quick else full


class SuiteCheck(NamedTuple):
    """A named acceptance check with its default tolerance."""

    name: str
    kind: str
    tolerance: float
    description: str
    measure: Callable[[SuiteContext], float]

    def passes(self, measured: float, tolerance: float) -> bool:
        """measured < tolerance for `max` checks, measured > tolerance for `min` checks (NaN never passes)."""
        if measured is None or math.isnan(measured):
            return False
        return measured < tolerance if self.kind == "max" else measured > tolerance


def _random_rectangle(rng: np.random.Generator, d: int, max_order: int) -> DyadicRectangle:
    levels = [int(level) for level in rng.integers(0, max_order // d + 2, size=d)]
    return DyadicRectangle.from_levels(levels, [int(rng.integers(0, 2**level)) for level in levels])


def _rect_grid(rect: DyadicRectangle, levels: Sequence[int]) -> GridFunction:
    return to_grid(haar_function(rect), levels)


def _trend_r_squared(xs: Sequence[float], ys: Sequence[float]) -> float:
    fit = linear_fit(xs, ys)
    return fit.r_squared if fit.slope > 0 else 0.0


def _best_shifted(ctx: SuiteContext, name: str, k: int) -> PointSet:
    seed = int(ctx.rng(f"{name}-{k}").integers(0, 2**63))
    mask, _ = best_shift(k, lambda pointset: l2_norm_exact(DiscrepancyField(pointset)), count=16, seed=seed)
    return shifted_van_der_corput(k, mask)


# Exact algebra:
def check_orthogonality(ctx: SuiteContext) -> float:
    """max |<h_R, h_R'>| over random distinct rectangles"""
    rng = ctx.rng("orthogonality")
    worst = 0.0
    for _ in range(ctx.pick(100, 1000)):
        d = int(rng.integers(1, 4))
        first, second = _random_rectangle(rng, d, 6), _random_rectangle(rng, d, 6)
        if first == second:
            continue
        levels = [max(a.level, b.level) + 1 for a, b in zip(first.sides, second.sides)]
        worst = max(worst, abs(_rect_grid(first, levels).inner(_rect_grid(second, levels))))
    return worst


def check_product_rule(ctx: SuiteContext) -> float:
    """Number of intersecting same-volume planar pairs where h_R h_R' differs from the product rule's signed Haar function"""
    rng = ctx.rng("product_rule")
    mismatches = 0
    for _ in range(ctx.pick(100, 1000)):
        n = int(rng.integers(1, 6))
        enumeration = rectangle_enumeration(n, 2)
        picked = [enumeration[index] for index in rng.choice(len(enumeration), 2, replace=False)]
        first, second = (DyadicRectangle.from_levels(shape.entries, position) for shape, position in picked)
        levels = (n + 1, n + 1)
        product = _rect_grid(first, levels) * _rect_grid(second, levels)
        predicted = product_rule(first, second)
        if predicted:
            expected = _rect_grid(predicted.rect, levels).map(lambda values, sign=predicted.sign: sign * values)
        else:
            expected = GridFunction.zeros(levels)
        mismatches += int(not np.array_equal(product.values, expected.values))
    return float(mismatches)


def check_parseval(ctx: SuiteContext) -> float:
    """max relative |‖F‖_2^2 - 2^-n sum alpha_R^2| over random gaussian hyperbolic sums"""
    rng = ctx.rng("parseval")
    worst = 0.0
    for _ in range(ctx.pick(100, 1000)):
        d = int(rng.integers(2, 4))
        n = int(rng.integers(0, 5 if d == 2 else 4))
        expansion = HaarExpansion.random_gaussian(n, d, rng)
        expected = 2.0**-n * expansion.square_sum()
        worst = max(worst, abs(lp_norm(expansion_to_grid(expansion), 2) ** 2 - expected) / max(1.0, expected))
    return worst


def check_counting(ctx: SuiteContext) -> float:
    """Number of (n, d) where count_rectangles differs from the enumeration"""
    pairs = [(n, d) for d in range(1, 5) for n in range(ctx.pick(5, 9))]
    return float(sum(count_rectangles(n, d) != len(rectangle_enumeration(n, d)) for n, d in pairs))


def check_rfunction_unit(ctx: SuiteContext) -> float:
    """max over cells of ||f_r| - 1| for random full-sign r-functions"""
    rng = ctx.rng("rfunction_unit")
    worst = 0.0
    for _ in range(ctx.pick(100, 1000)):
        d = int(rng.integers(1, 4))
        shape = ShapeVector(tuple(int(entry) for entry in rng.integers(0, 4, size=d)))
        rfunction = RFunction(shape, rng.choice(np.array([-1, 1], dtype=np.int8), size=shape.grid_shape))
        worst = max(worst, float(np.abs(np.abs(rfunction.to_grid().values) - 1).max()))
    return worst


# Riesz products:
def check_riesz(ctx: SuiteContext) -> float:
    """Worst of: -min Psi, |mean Psi - 1|, |‖Psi‖_1 - 1|, relative duality error, and (n + 1) - sup for full-sign sums"""
    rng = ctx.rng("riesz")
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, ctx.pick(6, 9)))
        expansion = HaarExpansion.random_gaussian(n, 2, rng)
        certificate = riesz_talagrand(expansion, n, raise_on_violation=False)
        bound = talagrand_lower_bound(expansion)
        duality = abs(duality_pair(expansion, certificate) - bound) / max(1.0, bound)
        full_sup = expansion_to_grid(HaarExpansion.random_signs(n, 2, rng)).abs_max()
        worst = max(worst, -certificate.minimum, abs(certificate.mean - 1), abs(certificate.l1 - 1), duality, (n + 1) - full_sup)
    return worst


# Small-ball oracles:
def check_oracle(ctx: SuiteContext) -> float:
    """Worst of |exhaustive - branch_and_bound| (inf if not proved) and how far local search and Monte Carlo undercut the certified bound"""
    cases = ctx.pick([(2, 1), (2, 2)], [(2, 1), (2, 2), (3, 2)])
    seed = int(ctx.rng("oracle").integers(0, 2**63))
    worst = 0.0
    for d, n in cases:
        exact = exhaustive_min(n, d)
        searched = branch_and_bound(n, d, budget_seconds=ctx.pick(30.0, 240.0))
        worst = max(worst, abs(exact.value - searched.value) if searched.proved else math.inf)
        for result in (local_search(n, d, restarts=4, seed=seed), mc_expectation(n, d, ctx.pick(10, 50), seed=seed)):
            worst = max(worst, result.certificate - result.value)
    return worst


def _exponent(ctx: SuiteContext, name: str, d: int, ns: Sequence[int], trials: int) -> float:
    seed = int(ctx.rng(name).integers(0, 2**63))
    values = [mc_expectation(n, d, trials, seed=seed).value for n in ns]
    return exponent_fit(ns, values).exponent


def check_exponent_d2(ctx: SuiteContext) -> float:
    """|fitted exponent - 1| of E sup over random planar sign sums"""
    return abs(_exponent(ctx, "exponent_d2", 2, ctx.pick(range(4, 9), range(4, 11)), ctx.pick(20, 200)) - 1.0)


def check_exponent_d3(ctx: SuiteContext) -> float:
    """|fitted exponent - 3/2| of E sup over random sign sums in d = 3"""
    return abs(_exponent(ctx, "exponent_d3", 3, ctx.pick(range(2, 6), range(2, 7)), ctx.pick(20, 200)) - 1.5)


# Discrepancy:
def check_l2_exact(ctx: SuiteContext) -> float:  # pylint: disable=unused-argument
    """|‖D_N‖_2 - sqrt(11/18)| for the single point at the origin"""
    return abs(l2_norm_exact(DiscrepancyField(PointSet(np.zeros((1, 2)), label="origin"))) - math.sqrt(11 / 18))


def check_l2_mc_z(ctx: SuiteContext) -> float:
    """max |exact - sampled| / stderr of ‖D_N‖_2 over random sets"""
    rng = ctx.rng("l2_mc_z")
    worst = 0.0
    for _ in range(ctx.pick(5, 20)):
        d = int(rng.integers(2, 4))
        field = DiscrepancyField(random_uniform(int(rng.integers(1, 65)), d, int(rng.integers(0, 2**63))))
        estimate = lp_norm_sampled(field, 2.0, resolution=ctx.pick(14 // d, None), seed=int(rng.integers(0, 2**63)))
        worst = max(worst, abs(l2_norm_exact(field) - estimate.value) / max(estimate.error, 1e-300))
    return worst


def check_haar(ctx: SuiteContext) -> float:
    """max |haar_coefficient - <D_N, h_R> by exact cell integration| over random sets and rectangles"""
    rng = ctx.rng("haar")
    worst = 0.0
    for _ in range(ctx.pick(40, 200)):
        d = int(rng.integers(2, 4))
        field = DiscrepancyField(random_uniform(int(rng.integers(1, 33)), d, int(rng.integers(0, 2**63))))
        rect = _random_rectangle(rng, d, 6)
        oracle = field.pairing(_rect_grid(rect, [side.level + 1 for side in rect.sides]))
        worst = max(worst, abs(haar_coefficient(field, rect) - oracle))
    return worst


def check_star_probe(ctx: SuiteContext) -> float:
    """max over sets of (max |D_N| at 10^4 uniform probes - exact star discrepancy)"""
    rng = ctx.rng("star_probe")
    sets = [van_der_corput(k) for k in (3, 5, 7)] + [random_uniform(int(rng.integers(1, 65)), 2, int(rng.integers(0, 2**63))) for _ in range(ctx.pick(2, 7))]
    worst = -math.inf
    for pointset in sets:
        field = DiscrepancyField(pointset)
        probes = rng.random((ctx.pick(2000, 10000), field.dimension))
        worst = max(worst, float(np.abs(field.eval_many(probes)).max()) - star_discrepancy_exact(field).value)
    return worst


# Lower-bound chains:
def check_chain(ctx: SuiteContext) -> float:
    """Number of van der Corput sets where the certified L2 bound exceeds the exact norm"""
    return float(sum(not chain_verify(DiscrepancyField(van_der_corput(k)), raise_on_violation=False).holds for k in ctx.pick(range(3, 8), range(3, 11))))


def check_chain_r2(ctx: SuiteContext) -> float:
    """r^2 of ‖D_N‖_2 against sqrt(log2 N) for best-of-16 shifted van der Corput sets (0 unless the slope is positive)"""
    ks = list(ctx.pick(range(3, 8), range(3, 11)))
    values = [l2_norm_exact(DiscrepancyField(_best_shifted(ctx, "chain_r2", k))) for k in ks]
    return _trend_r_squared([math.sqrt(k) for k in ks], values)


def check_schmidt_band(ctx: SuiteContext) -> float:
    """max / min of ‖D_N‖_inf / log2 N over van der Corput sets (inf unless the trend in log2 N is increasing)"""
    ks = list(ctx.pick(range(3, 9), range(3, 13)))
    values = [star_discrepancy_exact(DiscrepancyField(van_der_corput(k))).value for k in ks]
    if linear_fit(ks, values).slope <= 0:
        return math.inf
    ratios = [value / k for value, k in zip(values, ks)]
    return max(ratios) / min(ratios)


def check_halasz(ctx: SuiteContext) -> float:
    """min over van der Corput sets of <D_N, sin(0.1 F_2 / sqrt(n))> / sqrt(n)"""
    reports = [halasz_sine(DiscrepancyField(van_der_corput(k)), c=0.1) for k in ctx.pick(range(4, 7), range(4, 10))]
    return min(report.value / math.sqrt(report.n) for report in reports)


def check_halasz_l1(ctx: SuiteContext) -> float:
    """Number of van der Corput sets where a sampled ‖D_N‖_1 (plus 3 standard errors) is below the sine pairing"""
    seed = int(ctx.rng("halasz_l1").integers(0, 2**63))
    violations = 0
    for k in ctx.pick(range(4, 7), range(4, 10)):
        field = DiscrepancyField(van_der_corput(k))
        estimate = lp_norm_sampled(field, 1.0, resolution=ctx.pick(7, None), seed=seed)
        violations += int(estimate.value + 3 * estimate.error < halasz_sine(field, c=0.1).value)
    return float(violations)


def _lemma1_sets(ctx: SuiteContext) -> List[PointSet]:
    rng = ctx.rng("lemma1")
    ks = ctx.pick(range(3, 7), range(3, 9))
    return [van_der_corput(k) for k in ks] + [random_uniform(2**k, 2, int(rng.integers(0, 2**63))) for k in ks]


def _natural_order(n_points: int) -> int:
    return max(1, math.ceil(math.log2(2 * n_points)))


def check_lemma1_lower(ctx: SuiteContext) -> float:
    """min over sets and shapes |r| = n of <D_N, f_r>, 2N <= 2^n < 4N"""
    worst = math.inf
    for pointset in _lemma1_sets(ctx):
        field = DiscrepancyField(pointset)
        worst = min(worst, min(lemma1_rfunction(field, shape).pairing for shape in ShapeVector.all_of_order(_natural_order(field.n_points), 2)))
    return worst


def check_lemma1_upper(ctx: SuiteContext) -> float:
    """max over sets and shapes with |r| beyond n of max |<D_N, h_R>| 2^|r| / N"""
    worst = 0.0
    for pointset in _lemma1_sets(ctx):
        field = DiscrepancyField(pointset)
        n = _natural_order(field.n_points)
        for order in range(n + 1, n + ctx.pick(4, 7)):
            for shape in ShapeVector.all_of_order(order, 2):
                scaled = float(np.abs(haar_coefficients(field, shape)).max()) * 2.0**order / field.n_points
                worst = max(worst, scaled)
    return worst


def check_beck_constant(ctx: SuiteContext) -> float:
    """max over n of ‖sum over r_1 = s_1 of f_r f_s‖_2 / n^(3/2) in d = 3 with all plus signs"""
    return max(beck_gain_sum(n, 3, ladder=(2,)).rows[0].norm / n**1.5 for n in ctx.pick(range(1, 4), range(1, 5)))


# Orlicz norms:
def check_orlicz_power(ctx: SuiteContext) -> float:
    """max relative |power-p Orlicz norm - L^p norm| over random grids"""
    rng = ctx.rng("orlicz_power")
    worst = 0.0
    for _ in range(ctx.pick(10, 50)):
        grid = GridFunction((4, 4), rng.standard_normal((16, 16)))
        for p in (1.0, 1.5, 2.0, 3.0, 4.0, 8.0):
            exact = lp_norm(grid, p)
            worst = max(worst, abs(orlicz_norm(grid, OrliczSpec.power(p)) - exact) / exact)
    return worst


def check_orlicz_trend(ctx: SuiteContext) -> float:
    """r^2 of the exp(L^2) norm of D_N against sqrt(log2 N) for best-of-16 shifted van der Corput sets (0 unless the slope is positive)"""
    ks = list(ctx.pick(range(3, 8), range(3, 11)))
    values = [orlicz_norm_sampled(DiscrepancyField(_best_shifted(ctx, "orlicz_trend", k)), OrliczSpec.exp(2.0)) for k in ks]
    return _trend_r_squared([math.sqrt(k) for k in ks], values)


# Square functions:
def check_littlewood_paley(ctx: SuiteContext) -> float:
    """The fitted C in ||f||_p <= C sqrt(p) ||S(f)||_p over random gaussian and sign series (reported; the tolerance is a ceiling)"""
    rng = ctx.rng("littlewood_paley")
    family = [random_haar_series(ctx.pick(6, 10), rng, gaussian=index % 2 == 0) for index in range(ctx.pick(4, 16))]
    return littlewood_paley_probe(family, ladder=ctx.pick((2, 4, 8), (2, 4, 8, 16, 32))).constant


SUITE_CHECKS: List[SuiteCheck] = [
    SuiteCheck("orthogonality", "max", 1e-12, check_orthogonality.__doc__, check_orthogonality),
    SuiteCheck("product_rule", "max", 0.5, check_product_rule.__doc__, check_product_rule),
    SuiteCheck("parseval", "max", 1e-12, check_parseval.__doc__, check_parseval),
    SuiteCheck("counting", "max", 0.5, check_counting.__doc__, check_counting),
    SuiteCheck("rfunction_unit", "max", 1e-12, check_rfunction_unit.__doc__, check_rfunction_unit),
    SuiteCheck("riesz", "max", 1e-12, check_riesz.__doc__, check_riesz),
    SuiteCheck("oracle", "max", 0.5, check_oracle.__doc__, check_oracle),
    SuiteCheck("exponent_d2", "max", 0.2, check_exponent_d2.__doc__, check_exponent_d2),
    SuiteCheck("exponent_d3", "max", 0.4, check_exponent_d3.__doc__, check_exponent_d3),
    SuiteCheck("l2_exact", "max", 1e-12, check_l2_exact.__doc__, check_l2_exact),
    SuiteCheck("l2_mc_z", "max", 3.0, check_l2_mc_z.__doc__, check_l2_mc_z),
    SuiteCheck("haar", "max", 1e-6, check_haar.__doc__, check_haar),
    SuiteCheck("star_probe", "max", 1e-9, check_star_probe.__doc__, check_star_probe),
    SuiteCheck("chain", "max", 0.5, check_chain.__doc__, check_chain),
    SuiteCheck("chain_r2", "min", 0.9, check_chain_r2.__doc__, check_chain_r2),
    SuiteCheck("schmidt_band", "max", 3.0, check_schmidt_band.__doc__, check_schmidt_band),
    SuiteCheck("halasz", "min", 0.0, check_halasz.__doc__, check_halasz),
    SuiteCheck("halasz_l1", "max", 0.5, check_halasz_l1.__doc__, check_halasz_l1),
    SuiteCheck("lemma1_lower", "min", 0.0, check_lemma1_lower.__doc__, check_lemma1_lower),
    SuiteCheck("lemma1_upper", "max", 2.0, check_lemma1_upper.__doc__, check_lemma1_upper),
    SuiteCheck("beck_constant", "max", 6.0, check_beck_constant.__doc__, check_beck_constant),
    SuiteCheck("orlicz_power", "max", 1e-6, check_orlicz_power.__doc__, check_orlicz_power),
    SuiteCheck("orlicz_trend", "min", 0.8, check_orlicz_trend.__doc__, check_orlicz_trend),
    SuiteCheck("littlewood_paley", "max", 2.0, check_littlewood_paley.__doc__, check_littlewood_paley),
]

CHECKS_BY_NAME: Dict[str, SuiteCheck] = {check.name: check for check in SUITE_CHECKS}
