# rtsvd/crossval.py
"""
k-fold cross-validation of the recognition pipeline.

One seeded partition is shared by every method. Deterministic methods run
once per fold; randomized methods run `trials` times with seeds derived
from (seed, fold, trial), so reports do not depend on scheduling.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import TooFewSamples
from .executor import SliceExecutor, split_budget
from .observability import log_event
from .recognition import FaceDataset, Method, recognition_rate, train
from .sketch import IterationCount, SketchConfig


@dataclass(frozen=True)
class FoldResult:
    fold: int
    method: str
    rates: Tuple[float, ...]
    seconds: Tuple[float, ...]
    n_train: int
    n_test: int

    @property
    def mean(self) -> float:
        return float(np.mean(self.rates))

    @property
    def min(self) -> float:
        return float(np.min(self.rates))

    @property
    def max(self) -> float:
        return float(np.max(self.rates))


@dataclass(frozen=True)
class CVReport:
    k: int
    folds: int
    trials: int
    seed: int
    methods: Tuple[str, ...]
    results: Tuple[FoldResult, ...]

    def for_method(self, method: str) -> List[FoldResult]:
        return sorted((r for r in self.results if r.method == method), key=lambda r: r.fold)

    def to_dict(self) -> Dict[str, Any]:
        """Timing-free view; identical across runs with the same inputs."""
        return {
            "k": self.k,
            "folds": self.folds,
            "trials": self.trials,
            "seed": self.seed,
            "methods": list(self.methods),
            "results": [
                {
                    "fold": r.fold,
                    "method": r.method,
                    "n_train": r.n_train,
                    "n_test": r.n_test,
                    "rates": list(r.rates),
                    "mean": r.mean,
                    "min": r.min,
                    "max": r.max,
                }
                for r in self.results
            ],
        }

    def timing_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "timing": [
                {"fold": r.fold, "method": r.method, "seconds": list(r.seconds)} for r in self.results
            ],
        }


def fold_partition(n: int, folds: int, seed: Any = 0) -> List[np.ndarray]:
    """
    Seeded partition of range(n) into `folds` disjoint index sets; the first
    n % folds sets get one extra element. Indices inside a set are sorted.
    """
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if n < folds:
        raise TooFewSamples(f"{n} images cannot fill {folds} folds")
    perm = np.random.default_rng(seed).permutation(n)
    base, extra = divmod(n, folds)
    out, start = [], 0
    for f in range(folds):
        size = base + (1 if f < extra else 0)
        out.append(np.sort(perm[start : start + size]))
        start += size
    return out


def _run_fold(
    data: FaceDataset,
    fold: int,
    test_idx: np.ndarray,
    *,
    k: int,
    methods: Sequence[Method],
    trials: int,
    seed: int,
    p: int,
    q: IterationCount,
    eps: Optional[float],
    standardize: bool,
    inner: SliceExecutor,
    exploit_symmetry: Optional[bool],
) -> List[FoldResult]:
    mask = np.ones(data.n_images, dtype=bool)
    mask[test_idx] = False
    train_set = data.subset(np.flatnonzero(mask))
    test_set = data.subset(test_idx)
    results = []
    for method in methods:
        rates, seconds = [], []
        for trial in range(trials if method.randomized else 1):
            cfg = None
            if method.randomized:
                cfg = SketchConfig(
                    k=k,
                    p=p,
                    q=0 if method is Method.RTSVD else q,
                    eps=eps if method is Method.RTSVD_Q else None,
                    seed=(seed, fold, trial),
                )
            t0 = time.perf_counter()
            model = train(
                train_set,
                k,
                method,
                cfg,
                standardize=standardize,
                executor=inner,
                exploit_symmetry=exploit_symmetry,
            )
            seconds.append(time.perf_counter() - t0)
            rates.append(recognition_rate(model, test_set))
        results.append(
            FoldResult(
                fold=fold,
                method=method.value,
                rates=tuple(rates),
                seconds=tuple(seconds),
                n_train=train_set.n_images,
                n_test=test_set.n_images,
            )
        )
    return results


def cross_validate(
    data: FaceDataset,
    k: int,
    methods: Sequence[str] = ("tsvd", "rtsvd", "rtsvd-q"),
    folds: int = 10,
    trials: int = 20,
    seed: int = 0,
    *,
    p: int = 10,
    q: IterationCount = 1,
    eps: Optional[float] = None,
    standardize: bool = False,
    workers: int = 1,
    exploit_symmetry: Optional[bool] = None,
) -> CVReport:
    """
    Rates per fold and trial for every method. The worker budget is split
    between folds (outer) and Fourier slices (inner).
    """
    parts = fold_partition(data.n_images, folds, seed)
    method_list = [Method(m) for m in methods]
    outer, inner = split_budget(workers, folds)
    inner_exec = SliceExecutor(inner)

    def _job(fold: int) -> List[FoldResult]:
        return _run_fold(
            data,
            fold,
            parts[fold],
            k=k,
            methods=method_list,
            trials=trials,
            seed=seed,
            p=p,
            q=q,
            eps=eps,
            standardize=standardize,
            inner=inner_exec,
            exploit_symmetry=exploit_symmetry,
        )

    per_fold = SliceExecutor(outer).map(_job, range(folds))
    results = tuple(r for fold_results in per_fold for r in fold_results)
    # worker threads carry no run context; emit from here
    for r in results:
        log_event(
            "recognition.fold.completed",
            {"fold": r.fold, "method": r.method, "mean": r.mean, "min": r.min, "max": r.max},
        )
    return CVReport(
        k=k,
        folds=folds,
        trials=trials,
        seed=seed,
        methods=tuple(m.value for m in method_list),
        results=results,
    )
