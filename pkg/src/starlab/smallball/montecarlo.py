"""Random coefficient models for hyperbolic sums

mc_expectation estimates E ||sum alpha_R h_R||_inf for i.i.d. signs or standard normals, conjectured to grow like n^(d/2).
signed_sparse_sup draws sparse signed sums: a fixed fraction of the rectangles get a random sign, the rest 0.

:Module: starlab.smallball.montecarlo
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from starlab.hyperbolic import HaarExpansion, count_rectangles, expansion_to_grid
from starlab.smallball.problem import SearchResult, certified_lower_bound
from starlab.utils.logging import LOGGER
from starlab.utils.parallel import run_seeded_blocks

COEFFICIENT_MODELS = ("signs", "gaussian")
MAX_BLOCKS = 16


def _draw(n: int, d: int, model: str, rng: np.random.Generator) -> HaarExpansion:
    if model == "signs":
        return HaarExpansion.random_signs(n, d, rng)
    return HaarExpansion.random_gaussian(n, d, rng)


def mc_expectation(n: int, d: int, trials: int, seed: Optional[int] = None, model: str = "signs", threads: Optional[int] = None) -> SearchResult:
    """Sample mean and standard error of the sup norm over i.i.d. coefficient draws; deterministic per seed."""
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")
    if model not in COEFFICIENT_MODELS:
        raise ValueError(f"Unknown coefficient model: {model}. Pick one of {', '.join(COEFFICIENT_MODELS)}")

    sizes = [len(block) for block in np.array_split(np.arange(trials), min(trials, MAX_BLOCKS))]

    def block(index: int, rng: np.random.Generator) -> List[float]:
        return [expansion_to_grid(_draw(n, d, model, rng)).abs_max() for _ in range(sizes[index])]

    sups = np.array([value for values in run_seeded_blocks(block, len(sizes), seed, threads) for value in values], dtype=float)
    mean = float(sups.mean())
    stderr = float(sups.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")

    LOGGER.debug(f"[🎲] E||sum||_inf at n={n}, d={d} ({model}): {mean:.6g} +- {stderr:.3g} over {trials} trials")
    return SearchResult(
        n=n,
        d=d,
        method="monte_carlo",
        value=mean,
        status="estimate",
        certificate=certified_lower_bound(n, d) if model == "signs" else None,
        evaluations=trials,
        seed=seed,
        stderr=stderr,
        extra={"model": model, "trials": trials, "normalized": mean / max(n, 1) ** (d / 2)},
    )


@dataclass
class SparseSignedSample:
    """Sup norms of sparse signed sums, against the bounds that hold for every draw.

    l2_floor is ||F||_2 = sqrt(#nonzero * 2^-n). In the plane, pairing F with the Riesz product built on the signs of F gives
    ||F||_inf >= 2^-n * #nonzero, reported as riesz_bound.
    """

    n: int
    d: int
    density: float
    nonzero: int
    sups: List[float]
    l2_floor: float
    riesz_bound: Optional[float]

    @property
    def mean(self) -> float:
        """Average sup norm over the draws."""
        return float(np.mean(self.sups))

    @property
    def holds(self) -> bool:
        """Every draw is at or above both lower bounds."""
        floor = max(self.l2_floor, self.riesz_bound or 0.0)
        return all(value >= floor * (1 - 1e-12) for value in self.sups)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        record = asdict(self)
        record["mean"] = self.mean
        record["holds"] = self.holds
        return record


def signed_sparse_sup(n: int, d: int, density: float, seed: Optional[int] = None, trials: int = 1, threads: Optional[int] = None) -> SparseSignedSample:
    """Sup norms of sums with exactly ceil(density * M) coefficients in {-1, +1} at random positions, the rest 0."""
    if not 0 < density <= 1:
        raise ValueError(f"The density of nonzero coefficients must be in (0, 1], got {density}")
    if trials < 1:
        raise ValueError(f"Need at least one trial, got {trials}")

    total = count_rectangles(n, d)
    nonzero = max(1, math.ceil(density * total))

    def draw(_: int, rng: np.random.Generator) -> float:
        coefficients = np.zeros(total, dtype=np.int8)
        positions = rng.choice(total, size=nonzero, replace=False)
        coefficients[positions] = rng.choice(np.array([-1, 1], dtype=np.int8), size=nonzero)
        return expansion_to_grid(HaarExpansion.from_sign_vector(n, d, coefficients)).abs_max()

    sups = [float(value) for value in run_seeded_blocks(draw, trials, seed, threads)]
    riesz_bound = nonzero * 2.0**-n if d == 2 else None
    return SparseSignedSample(n, d, density, nonzero, sups, math.sqrt(nonzero * 2.0**-n), riesz_bound)
