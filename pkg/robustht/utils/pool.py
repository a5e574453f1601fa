"""
Worker pool for embarrassingly parallel trial and corpus batches
"""

import asyncio
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, TypeVar

from robustht.config import DEFAULT_JOBS, JOBS_ENV_VAR

logger = logging.getLogger(__name__)

__all__ = (
    "default_jobs",
    "gather_map",
    "run_map",
    "chunk_ranges"
)

T = TypeVar("T")

def default_jobs() -> int:
    """Worker count from the environment, falling back to the configured default"""
    raw = os.environ.get(JOBS_ENV_VAR)
    if not raw:
        return DEFAULT_JOBS
    try:
        jobs = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {JOBS_ENV_VAR}={raw!r}")
        return DEFAULT_JOBS
    return max(1, jobs)

async def gather_map(fn: Callable[[Any], T], items: Sequence[Any], jobs: Optional[int] = None) -> List[T]:
    """Apply ``fn`` to every item, possibly in worker processes.

    Results come back in input order whatever the worker count, so reductions
    over them are deterministic.
    """
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as executor:
        tasks = [loop.run_in_executor(executor, fn, item) for item in items]
        results = await asyncio.gather(*tasks)
    logger.debug(f"Pool finished {len(items)} items on {jobs} workers")
    return list(results)

def run_map(fn: Callable[[Any], T], items: Sequence[Any], jobs: Optional[int] = None) -> List[T]:
    """Synchronous wrapper around :func:`gather_map`"""
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1:
        return [fn(item) for item in items]
    return asyncio.run(gather_map(fn, items, jobs))

def chunk_ranges(total: int, parts: int) -> List[range]:
    """Split ``range(total)`` into at most ``parts`` contiguous ranges"""
    parts = max(1, min(parts, total)) if total > 0 else 1
    step, extra = divmod(total, parts)
    ranges = []
    start = 0
    for i in range(parts):
        stop = start + step + (1 if i < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges
