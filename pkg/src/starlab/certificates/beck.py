"""Beck-gain coincidence sums

Products f_r f_s of r-functions whose shapes coincide in some coordinate are not Haar functions, but they still behave almost
orthogonally. The basic sum runs over ordered pairs r != s of order n with r_1 = s_1; per value of the first coordinate it is
(sum f)^2 - sum f^2. General patterns fix which coordinates coincide across a k-tuple of distinct shapes, and the number of free
integer parameters M left by the pattern predicts the growth n^(M/2) of the L2 norm.

:Module: starlab.certificates.beck
"""
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from starlab.dyadic import GridFunction, ShapeVector, check_grid_budget
from starlab.hyperbolic import HaarExpansion, InvalidExpansionError, hyperbolic_levels, lp_norm, shape_layer
from starlab.smallball.fitting import ExponentFit, exponent_fit
from starlab.utils.logging import LOGGER

MAX_PATTERN_ARITY = 3
SIGN_MODES = ("plus", "random")

Coincidence = Tuple[int, int, int]


class InvalidPatternError(ValueError):
    """Raised for a coincidence pattern that refers to tuple members or axes that do not exist."""


class NormRow(NamedTuple):
    """||sum||_p and its ratio to the predicted growth."""

    p: float
    norm: float
    ratio: float


def _layers(n: int, d: int, signs: Optional[HaarExpansion]) -> Dict[ShapeVector, np.ndarray]:
    levels = hyperbolic_levels(n, d)
    check_grid_budget(levels)
    layers = {}
    for shape in ShapeVector.all_of_order(n, d):
        coefficients = np.ones(shape.grid_shape, dtype=np.int8) if signs is None else np.sign(signs.coefficients(shape)).astype(np.int8)
        layers[shape] = shape_layer(shape, coefficients, levels).astype(np.int64)
    return layers


def sign_expansion(n: int, d: int, mode: str = "plus", rng: Optional[np.random.Generator] = None) -> HaarExpansion:
    """All +1 signs, or independent random signs."""
    if mode not in SIGN_MODES:
        raise InvalidExpansionError(f"Unknown sign mode: {mode}. Pick one of {', '.join(SIGN_MODES)}")
    if mode == "plus":
        return HaarExpansion.constant_signs(n, d)
    return HaarExpansion.random_signs(n, d, rng if rng is not None else np.random.default_rng())


@dataclass
class BeckGainReport:
    """The coincidence sum over r != s with r_1 = s_1, on the (n+1)-grid, with its norm table."""

    n: int
    d: int
    pairs: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]
    grid: GridFunction
    rows: List[NormRow]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record (the grid is left out)."""
        return {"n": self.n, "d": self.d, "pairs": len(self.pairs), "norms": [row._asdict() for row in self.rows]}


def beck_gain_sum(n: int, d: int, signs: Optional[HaarExpansion] = None, ladder: Sequence[float] = (2, 4, 8)) -> BeckGainReport:
    """sum over ordered pairs r != s, |r| = |s| = n, r_1 = s_1 of f_r f_s, exactly on the grid.

    Norms are reported against p^(d-1) n^((2d-3)/2) (n = 0 counts as 1).
    """
    if d < 3:
        raise InvalidExpansionError(f"Coincidence sums need d >= 3, got d={d}")

    layers = _layers(n, d, signs)
    groups: Dict[int, List[ShapeVector]] = {}
    for shape in layers:
        groups.setdefault(shape.entries[0], []).append(shape)

    total = np.zeros(tuple(2**level for level in hyperbolic_levels(n, d)), dtype=np.int64)
    pairs = []
    for first in sorted(groups):
        members = groups[first]
        linear = sum(layers[shape] for shape in members)
        total += linear * linear - sum(layers[shape] * layers[shape] for shape in members)
        pairs.extend((r.entries, s.entries) for r in members for s in members if r != s)

    grid = GridFunction(hyperbolic_levels(n, d), total)
    scale = max(n, 1) ** ((2 * d - 3) / 2)
    rows = []
    for p in ladder:
        norm = lp_norm(grid, float(p))
        rows.append(NormRow(float(p), norm, norm / (float(p) ** (d - 1) * scale)))

    LOGGER.debug(f"[🎯] Beck sum at n={n}, d={d}: {len(pairs)} ordered pairs, ||.||_2 = {rows[0].norm if rows else float('nan'):.6g}")
    return BeckGainReport(n, d, pairs, grid, rows)


def validate_pattern(k: int, d: int, pattern: Sequence[Coincidence]) -> List[Coincidence]:
    """Checks a pattern of coincidences (i, j, axis): member i and member j of the k-tuple share their entry on the axis."""
    if not 2 <= k <= MAX_PATTERN_ARITY:
        raise InvalidPatternError(f"Patterns cover tuples of 2 to {MAX_PATTERN_ARITY} shapes, got k={k}")

    cleaned = []
    for entry in pattern:
        if len(entry) != 3:
            raise InvalidPatternError(f"A coincidence is (i, j, axis), got {tuple(entry)}")
        first, second, axis = (int(value) for value in entry)
        if not (0 <= first < k and 0 <= second < k and first != second):
            raise InvalidPatternError(f"Coincidence {tuple(entry)} refers to members outside of a {k}-tuple")
        if not 0 <= axis < d:
            raise InvalidPatternError(f"Coincidence {tuple(entry)} refers to an axis outside of dimension {d}")
        cleaned.append((min(first, second), max(first, second), axis))

    return sorted(set(cleaned))


def free_parameters(k: int, d: int, pattern: Sequence[Coincidence]) -> int:
    """M: the k*d shape entries minus the independent constraints (one order constraint per member, plus the coincidences)."""
    constraints = []
    for member in range(k):
        row = np.zeros(k * d)
        row[member * d : (member + 1) * d] = 1
        constraints.append(row)
    for first, second, axis in validate_pattern(k, d, pattern):
        row = np.zeros(k * d)
        row[first * d + axis] = 1
        row[second * d + axis] = -1
        constraints.append(row)
    return k * d - int(np.linalg.matrix_rank(np.array(constraints)))


@dataclass
class PatternReport:
    """The coincidence-pattern sum at one scale."""

    n: int
    d: int
    k: int
    pattern: List[Coincidence]
    tuples: int
    free_parameters: int
    rows: List[NormRow]

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "pattern": [list(entry) for entry in self.pattern],
            "tuples": self.tuples,
            "M": self.free_parameters,
            "norms": [row._asdict() for row in self.rows],
        }


def coincidence_pattern_sum(
    n: int, d: int, k: int, pattern: Sequence[Coincidence], signs: Optional[HaarExpansion] = None, ladder: Sequence[float] = (2, 4, 8)
) -> PatternReport:
    """sum of f_r1 ... f_rk over k-tuples of distinct shapes of order n that match the pattern; norms are reported against n^(M/2)."""
    pattern = validate_pattern(k, d, pattern)
    layers = _layers(n, d, signs)
    shapes = list(layers)

    total = np.zeros(tuple(2**level for level in hyperbolic_levels(n, d)), dtype=np.int64)
    tuples = 0
    for members in product(shapes, repeat=k):
        if len(set(members)) != k:
            continue
        if any(members[first].entries[axis] != members[second].entries[axis] for first, second, axis in pattern):
            continue
        term = layers[members[0]]
        for member in members[1:]:
            term = term * layers[member]
        total += term
        tuples += 1

    grid = GridFunction(hyperbolic_levels(n, d), total)
    m_free = free_parameters(k, d, pattern)
    scale = max(n, 1) ** (m_free / 2)
    rows = []
    for p in ladder:
        norm = lp_norm(grid, float(p))
        rows.append(NormRow(float(p), norm, norm / scale))
    return PatternReport(n, d, k, pattern, tuples, m_free, rows)


@dataclass
class PatternGrowth:
    """L2 norms of a pattern sum across scales, with the fitted n-exponent against the predicted M/2."""

    reports: List[PatternReport]
    fit: Optional[ExponentFit]
    predicted: float

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        return {
            "predicted_exponent": self.predicted,
            "fit": self.fit.to_dict() if self.fit else None,
            "reports": [report.to_dict() for report in self.reports],
        }


def pattern_growth(
    ns: Sequence[int], d: int, k: int, pattern: Sequence[Coincidence], sign_mode: str = "plus", seed: Optional[int] = None
) -> PatternGrowth:
    """Evaluates the pattern sum at every n and fits the growth of its L2 norm (zero sums are left out of the fit)."""
    rng = np.random.default_rng(seed)
    reports = []
    for n in ns:
        reports.append(coincidence_pattern_sum(n, d, k, pattern, sign_expansion(n, d, sign_mode, rng), ladder=(2,)))

    usable = [(report.n, report.rows[0].norm) for report in reports if report.n > 0 and report.rows[0].norm > 0]
    fit = exponent_fit([n for n, _ in usable], [norm for _, norm in usable]) if len(usable) >= 3 else None
    predicted = reports[0].free_parameters / 2 if reports else float("nan")
    return PatternGrowth(reports, fit, predicted)
