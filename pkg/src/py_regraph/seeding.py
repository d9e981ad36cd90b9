"""Deterministic random streams and the sample worker pool.

Every Monte-Carlo sample draws from its own ``numpy`` generator built on a
``SeedSequence`` keyed by ``(seed, *keys)``. Results therefore depend only on
the seed and the sample coordinates, never on scheduling or worker count.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar, Union

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

#: Accepted seed forms: a plain integer, an existing generator, or ``None``
#: for fresh OS entropy.
SeedLike = Union[int, np.random.Generator, None]

logger = logging.getLogger(__name__)


def derive_rng(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for the stream ``(seed, *keys)``.

    Args:
        seed: Run seed.
        *keys: Stream coordinates, e.g. ``(size_index, sample_index)``.

    Returns:
        np.random.Generator: Independent PCG64 stream.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def sample_seed(seed: int, *keys: int) -> int:
    """32-bit integer seed of the stream ``(seed, *keys)``.

    Output rows record this value; ``derive_rng(sample_seed(...))`` rebuilds
    the sample on its own.
    """
    state = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(1)
    return int(state[0])


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Coerce ``seed`` into a generator, passing generators through untouched."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        return np.random.default_rng()
    return derive_rng(seed)


def run_tasks(
    fn: Callable[[T], R], tasks: Iterable[T], workers: Optional[int] = 1
) -> List[R]:
    """Apply ``fn`` to every task, preserving task order in the result.

    Args:
        fn: Picklable, module-level callable.
        tasks: Task arguments.
        workers: Process count; ``None``/``1`` runs in-process.

    Returns:
        List[R]: Results in task order.
    """
    tasks = list(tasks)
    if not workers or workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    logger.debug("Dispatching %d tasks to %d workers", len(tasks), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


__all__ = ["SeedLike", "as_generator", "derive_rng", "run_tasks", "sample_seed"]
