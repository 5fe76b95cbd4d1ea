"""Exhaustive and local search over sign assignments

Exhaustive search fixes the first rectangle to +1 (the sup norm is invariant under a global flip) and scans the remaining 2^(M-1)
assignments as a product of two sign tables: the low bits are one dense (cells, 2^low) table of partial sums, every high code shifts
it by one column. Local search descends by single flips, scored by the sup norm and then the number of cells attaining it.

:Module: starlab.smallball.search
"""
from concurrent.futures import ThreadPoolExecutor
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from starlab.smallball.problem import SearchBudgetError, SearchResult, SignedSum, certified_lower_bound, l2_floor
from starlab.utils.configuration import STARLAB_CONFIGURATION
from starlab.utils.logging import LOGGER
from starlab.utils.parallel import run_seeded_blocks, worker_count

LOW_BITS = 12
CHUNK_ENTRIES = 2**22
MAX_DESCENT_STEPS = 10_000


class FloorViolationError(Exception):
    """Raised when an evaluated assignment has a sup norm below its L2 norm, which means the evaluation is broken."""


class _ChunkScan(NamedTuple):
    minimum: int
    code: int
    total: int


def sign_table(bits: int) -> np.ndarray:
    """(bits, 2^bits) table of signs: column c holds 1 - 2 * (bit b of c) in row b."""
    codes = np.arange(2**bits)
    return (1 - 2 * ((codes[None, :] >> np.arange(bits)[:, None]) & 1)).astype(np.int32)


def _scan_assignments(problem: SignedSum, threads: Optional[int] = None) -> List[_ChunkScan]:
    """Sup norms of every assignment with eps_0 = +1, reduced per chunk of high codes to (min, first code attaining it, sum)."""
    matrix = problem.dense_matrix
    free = problem.rectangle_count - 1
    low = min(free, LOW_BITS)
    high = free - low

    base = matrix[:, :1] + matrix[:, 1 : 1 + low] @ sign_table(low)
    high_matrix = matrix[:, 1 + low :]
    high_table = sign_table(high)
    chunk = max(1, CHUNK_ENTRIES // base.size)

    def scan(start: int) -> _ChunkScan:
        stop = min(start + chunk, 2**high)
        shift = high_matrix @ high_table[:, start:stop]
        sups = np.abs(base[:, :, None] + shift[:, None, :]).max(axis=0).T.ravel()
        best = int(np.argmin(sups))
        return _ChunkScan(int(sups[best]), (start << low) + best, int(sups.sum()))

    starts = range(0, 2**high, chunk)
    workers = worker_count(threads)
    if workers == 1 or len(starts) == 1:
        return [scan(start) for start in starts]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(scan, starts))


def _assignment_of(code: int, rectangle_count: int) -> np.ndarray:
    signs = np.ones(rectangle_count, dtype=np.int8)
    for bit in range(rectangle_count - 1):
        if (code >> bit) & 1:
            signs[bit + 1] = -1
    return signs


def _check_budget(problem: SignedSum) -> None:
    limit = STARLAB_CONFIGURATION.settings["exhaustive_max_rectangles"]
    if problem.rectangle_count > limit:
        raise SearchBudgetError(
            f"{problem.rectangle_count} rectangles at n={problem.n}, d={problem.d} is more than the exhaustive limit of {limit}. "
            "Use branch_and_bound instead (`smallball --method branch_and_bound --budget-seconds ...`)."
        )


def exhaustive_min(n: int, d: int, threads: Optional[int] = None) -> SearchResult:
    """The exact minimum of ||sum eps_R h_R||_inf over all +-1 assignments; ties go to the first assignment in scan order."""
    problem = SignedSum(n, d)
    _check_budget(problem)

    LOGGER.debug(f"[🔎] Exhaustive scan of 2^{problem.rectangle_count - 1} assignments at n={n}, d={d}...")
    chunks = _scan_assignments(problem, threads)
    best = min(chunks, key=lambda chunk: (chunk.minimum, chunk.code))

    assignment = _assignment_of(best.code, problem.rectangle_count)
    return SearchResult(
        n=n,
        d=d,
        method="exhaustive",
        value=best.minimum,
        status="proved",
        certificate=certified_lower_bound(n, d),
        assignment=assignment,
        evaluations=2 ** (problem.rectangle_count - 1),
    )


def sign_expectation_exact(n: int, d: int, threads: Optional[int] = None) -> float:
    """E ||sum eps_R h_R||_inf over uniform random signs, by enumeration (half the assignments suffice by flip symmetry)."""
    problem = SignedSum(n, d)
    _check_budget(problem)
    chunks = _scan_assignments(problem, threads)
    return sum(chunk.total for chunk in chunks) / 2 ** (problem.rectangle_count - 1)


def _descend(problem: SignedSum, signs: np.ndarray, max_steps: int) -> Tuple[int, np.ndarray, int]:
    """Best-improvement single flips until no flip lowers (sup, #cells at the sup). Returns (sup, signs, flips evaluated)."""
    cover, pattern = problem.cover, problem.pattern
    per_shape = 2**problem.n
    rows = np.arange(problem.shape_count)[:, None]
    columns = np.arange(per_shape)[None, :]
    stride = problem.cell_count + 1

    values = problem.evaluate(signs)
    evaluations = 0
    for _ in range(max_steps):
        magnitude = np.abs(values)
        sup = int(magnitude.max())
        histogram = np.bincount(magnitude, minlength=sup + 3)
        current = sup * stride + int(histogram[sup])

        inside_old = magnitude[cover]
        inside_new = np.abs(values[cover] - 2 * signs[:, None] * pattern)
        inside_new_max = inside_new.max(axis=1)

        # Rectangles of one shape partition the cells: the max outside a rectangle is the best of its siblings.
        grouped = inside_old.max(axis=1).reshape(problem.shape_count, per_shape)
        order = np.argsort(-grouped, axis=1, kind="stable")
        top = grouped[rows, order[:, :1]]
        runner_up = grouped[rows, order[:, 1:2]] if per_shape > 1 else np.full_like(top, -1)
        outside_max = np.where(columns == order[:, :1], runner_up, top).ravel()

        new_sup = np.maximum(inside_new_max, outside_max)
        inside_count = (inside_new == new_sup[:, None]).sum(axis=1)
        outside_count = histogram[new_sup] - (inside_old == new_sup[:, None]).sum(axis=1)
        scores = new_sup * stride + inside_count + outside_count
        evaluations += signs.size

        flip = int(np.argmin(scores))
        if scores[flip] >= current:
            return sup, signs, evaluations

        values[cover[flip]] -= 2 * signs[flip] * pattern[flip]
        signs[flip] = -signs[flip]

    LOGGER.warning(f"[⏱️] Local search stopped after {max_steps} flips at n={problem.n}, d={problem.d} without reaching a local minimum")
    return int(np.abs(values).max()), signs, evaluations


def local_search(
    n: int, d: int, restarts: int = 8, seed: Optional[int] = None, threads: Optional[int] = None, max_steps: int = MAX_DESCENT_STEPS
) -> SearchResult:
    """Best local minimum over random starts; an upper bound on the true minimum, deterministic per seed."""
    if restarts < 1:
        raise ValueError(f"Local search needs at least one restart, got {restarts}")

    problem = SignedSum(n, d)
    floor = l2_floor(n, d)

    def restart(_: int, rng: np.random.Generator) -> Tuple[int, np.ndarray, int]:
        signs = rng.choice(np.array([-1, 1], dtype=np.int64), size=problem.rectangle_count)
        return _descend(problem, signs, max_steps)

    outcomes = run_seeded_blocks(restart, restarts, seed, threads)
    for sup, _, _ in outcomes:
        if sup < floor:
            raise FloorViolationError(f"[💥] A sup norm of {sup} at n={n}, d={d} is below the L2 floor {floor}")

    best = min(range(restarts), key=lambda index: (outcomes[index][0], index))
    sup, signs, _ = outcomes[best]
    LOGGER.debug(f"[🔎] Local search at n={n}, d={d}: best {sup} over {restarts} restarts (floor {floor})")
    return SearchResult(
        n=n,
        d=d,
        method="local_search",
        value=sup,
        status="upper_bound",
        certificate=certified_lower_bound(n, d),
        assignment=signs.astype(np.int8),
        evaluations=sum(outcome[2] for outcome in outcomes),
        seed=seed,
        extra={"restarts": restarts, "restart_values": [outcome[0] for outcome in outcomes]},
    )
