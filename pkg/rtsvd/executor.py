# rtsvd/executor.py
"""
Bounded worker pool for independent per-slice (and per-fold) work items.

Results always come back in input order, so merged output does not depend
on scheduling or on the number of workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple, TypeVar

from joblib import Parallel, delayed

from .config import resolve_workers

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class SliceExecutor:
    workers: int = 1

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        items = list(items)
        if self.workers == 1 or len(items) <= 1:
            return [fn(x) for x in items]
        n_jobs = min(self.workers, len(items))
        # thread backend: LAPACK/FFT kernels release the GIL and inputs stay shared
        return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(fn)(x) for x in items)


def default_executor(workers: Optional[int] = None) -> SliceExecutor:
    return SliceExecutor(resolve_workers(workers))


def split_budget(workers: int, jobs: int) -> Tuple[int, int]:
    """
    Split one global worker budget into (outer, inner) so outer * inner <= workers.
    Outer runs independent jobs (folds), inner runs Fourier slices.
    """
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    outer = max(1, min(workers, jobs))
    inner = max(1, workers // outer)
    return outer, inner
