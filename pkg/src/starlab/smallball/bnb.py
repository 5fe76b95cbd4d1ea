"""Branch and bound over sign assignments with pybnb

Nodes are sign prefixes in rectangle-enumeration order, the first sign fixed to +1. A node's bound is the larger of the certified
lower bound and max over cells of |partial sum| minus the number of unfixed rectangles covering the cell (each one moves the cell by
at most 1). Its objective is the greedy completion of the prefix, so every node carries a feasible assignment.

:Module: starlab.smallball.bnb
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Optional, Sequence, Tuple

import numpy as np
import pybnb

from starlab.smallball.problem import SearchResult, SignedSum, certified_lower_bound
from starlab.utils.logging import LOGGER
from starlab.utils.parallel import worker_count

# Objectives are integers, so a gap under 1 closes the search:
ABSOLUTE_GAP = 0.5


class SignAssignmentProblem(pybnb.Problem):
    """The sign-assignment minimization over the subtree below a fixed prefix."""

    def __init__(self, problem: SignedSum, prefix: Sequence[int] = (1,)):
        self._problem = problem
        self._floor = certified_lower_bound(problem.n, problem.d)
        self._completion: Optional[np.ndarray] = None
        self._load(np.asarray(prefix, dtype=np.int64))

    def _load(self, prefix: np.ndarray) -> None:
        problem = self._problem
        depth = prefix.size
        self._depth = depth
        self._signs = np.zeros(problem.rectangle_count, dtype=np.int64)
        self._signs[:depth] = prefix

        cover = problem.cover[:depth].ravel()
        weights = (prefix[:, None] * problem.pattern[:depth]).ravel()
        self._partial = np.rint(np.bincount(cover, weights=weights, minlength=problem.cell_count)).astype(np.int64)
        self._unfixed = problem.shape_count - np.bincount(cover, minlength=problem.cell_count)

    def complete(self) -> np.ndarray:
        """Greedy completion: each remaining rectangle takes the sign that keeps the max over its own cells smaller (+1 on ties)."""
        problem = self._problem
        values = self._partial.copy()
        signs = self._signs.copy()
        for index in range(self._depth, problem.rectangle_count):
            cells = problem.cover[index]
            contribution = problem.pattern[index].astype(np.int64)
            plus = np.abs(values[cells] + contribution).max()
            minus = np.abs(values[cells] - contribution).max()
            sign = 1 if plus <= minus else -1
            values[cells] += sign * contribution
            signs[index] = sign
        self._completion = signs
        return signs

    def sense(self):
        return pybnb.minimize

    def objective(self):
        signs = self.complete()
        return int(np.abs(self._problem.evaluate(signs)).max())

    def bound(self):
        relaxed = int((np.abs(self._partial) - self._unfixed).max())
        return max(self._floor, relaxed)

    def save_state(self, node):
        node.state = self._signs[: self._depth].copy()

    def load_state(self, node):
        self._load(np.asarray(node.state, dtype=np.int64))

    def branch(self):
        if self._depth >= self._problem.rectangle_count:
            return
        prefix = self._signs[: self._depth]
        for sign in (1, -1):
            child = pybnb.Node()
            child.state = np.append(prefix, sign)
            yield child


def _solve_subtree(problem: SignedSum, prefix: Sequence[int], budget_seconds: Optional[float], node_limit: Optional[int]) -> Tuple[int, np.ndarray, bool, int]:
    """(best value, its full assignment, whether the subtree was closed, nodes explored)"""
    subproblem = SignAssignmentProblem(problem, prefix)
    solver_log = logging.getLogger("starlab.pybnb") if LOGGER.isEnabledFor(logging.DEBUG) else None
    results = pybnb.solve(
        subproblem,
        comm=None,
        queue_strategy="depth",
        absolute_gap=ABSOLUTE_GAP,
        relative_gap=0,
        time_limit=budget_seconds,
        node_limit=node_limit,
        log=solver_log,
        disable_signal_handlers=True,
    )

    if results.best_node is None:
        # No incumbent recorded: fall back to the completion of the subtree root.
        subproblem = SignAssignmentProblem(problem, prefix)
        assignment = subproblem.complete()
    else:
        subproblem.load_state(results.best_node)
        assignment = subproblem.complete()

    value = int(np.abs(problem.evaluate(assignment)).max())
    return value, assignment, results.solution_status == "optimal", int(results.nodes)


def branch_and_bound(
    n: int, d: int, budget_seconds: Optional[float] = None, node_limit: Optional[int] = None, split_depth: int = 0, threads: Optional[int] = None
) -> SearchResult:
    """Depth-first branch and bound. Flagged `proved` when the tree is exhausted within the budget, `incumbent` otherwise.

    With split_depth > 0 the tree is cut below the first split_depth free signs and the subtrees are solved on a thread pool (each with the
    full budget); the combined minimum is proved only when every subtree is closed.
    """
    problem = SignedSum(n, d)
    split_depth = max(0, min(split_depth, problem.rectangle_count - 1))
    prefixes = [(1,) + tail for tail in product((1, -1), repeat=split_depth)]

    LOGGER.debug(f"[🌳] Branch and bound at n={n}, d={d}: {problem.rectangle_count} rectangles, {len(prefixes)} subtree(s)...")
    workers = worker_count(threads)
    if workers == 1 or len(prefixes) == 1:
        outcomes = [_solve_subtree(problem, prefix, budget_seconds, node_limit) for prefix in prefixes]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda prefix: _solve_subtree(problem, prefix, budget_seconds, node_limit), prefixes))

    best = min(range(len(outcomes)), key=lambda index: (outcomes[index][0], index))
    value, assignment, _, _ = outcomes[best]
    certificate = certified_lower_bound(n, d)
    proved = all(outcome[2] for outcome in outcomes) or value == certificate
    if not proved:
        LOGGER.warning(f"[⏱️] Branch and bound at n={n}, d={d} ran out of budget: returning the incumbent {value} (lower bound {certificate})")

    return SearchResult(
        n=n,
        d=d,
        method="branch_and_bound",
        value=value,
        status="proved" if proved else "incumbent",
        certificate=certificate,
        assignment=assignment.astype(np.int8),
        evaluations=sum(outcome[3] for outcome in outcomes),
        extra={"subtrees": len(prefixes)},
    )
