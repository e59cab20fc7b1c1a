"""Order-preserving parallel map on top of joblib."""

from typing import Callable, Iterable, List, Optional, TypeVar

from joblib import Parallel, cpu_count, delayed

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int]) -> int:
    """None/0 means every available core; 1 forces serial execution."""
    if not threads:
        return max(1, cpu_count())
    return max(1, int(threads))


def parallel_map(func: Callable[[T], R], items: Iterable[T], n_jobs: int = 1) -> List[R]:
    """Apply func to every item, results in input order whatever n_jobs is."""
    items = list(items)
    if n_jobs <= 1 or len(items) < 2:
        return [func(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)
