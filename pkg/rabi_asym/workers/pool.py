"""
Process pool for independent grid points.

Each payload is handled by a module-level function in a worker process;
results come back in payload order whatever the completion order. With
jobs=1 everything runs in the calling process, which keeps tracebacks
readable when debugging.
"""
import logging
from multiprocessing import Pool, cpu_count
from typing import Callable, Iterable, List, Optional, TypeVar

from rabi_asym.core.config import get_settings

logger = logging.getLogger(__name__)

P = TypeVar("P")
R = TypeVar("R")


def resolve_jobs(jobs: Optional[int]) -> int:
    """None -> DEFAULT_JOBS setting, 0 -> all cores"""
    if jobs is None:
        jobs = get_settings().DEFAULT_JOBS
    if jobs <= 0:
        jobs = cpu_count()
    return jobs


def run_ordered(worker: Callable[[P], R], payloads: Iterable[P], jobs: Optional[int] = None) -> List[R]:
    """Map `worker` over `payloads`, preserving order.

    `worker` must be picklable (a module-level function) when jobs > 1.
    Worker exceptions propagate to the caller.
    """
    items = list(payloads)
    jobs = min(resolve_jobs(jobs), max(len(items), 1))
    if jobs == 1:
        return [worker(item) for item in items]

    chunksize = max(1, len(items) // (4 * jobs))
    logger.info(f"Dispatching {len(items)} grid points to {jobs} workers (chunksize={chunksize})")
    with Pool(processes=jobs, maxtasksperchild=200) as pool:
        return list(pool.imap(worker, items, chunksize=chunksize))
