"""Deterministic parallel trial blocks

Random work is cut into a fixed number of blocks, each seeded by its own child of one SeedSequence. The blocks run on a thread pool
(numpy releases the GIL in its kernels) and their results come back in block order, so the outcome depends on the seed and the
block count but never on the number of workers.

:Module: starlab.utils.parallel
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from starlab.utils.configuration import STARLAB_CONFIGURATION

T = TypeVar("T")


def worker_count(threads: Optional[int] = None) -> int:
    """The explicit thread count, or the configured Threads setting."""
    return int(threads) if threads else int(STARLAB_CONFIGURATION.settings["threads"])


def run_seeded_blocks(func: Callable[[int, np.random.Generator], T], n_blocks: int, seed: Optional[int], threads: Optional[int] = None) -> List[T]:
    """Calls func(block_index, rng) for every block, each with an independent generator, and returns the results in block order."""
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    workers = worker_count(threads)

    def run(index: int) -> T:
        return func(index, np.random.default_rng(children[index]))

    if workers == 1 or n_blocks == 1:
        return [run(index) for index in range(n_blocks)]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(n_blocks)))
