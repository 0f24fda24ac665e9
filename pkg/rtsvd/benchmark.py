# rtsvd/benchmark.py
"""
Relative-error benchmark: exact minimal error e_k against the mean,
min and max of the randomized error over seeded trials, per (k, q).
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .config import DEFAULT_CONFIG
from .observability import log_event
from .randomized import rtsvd_subspace
from .sketch import SketchConfig
from .tensor import Tensor3
from .tsvd import relative_optimal_error, singular_spectrum


@dataclass(frozen=True)
class BenchRow:
    k: int
    q: int
    p: int
    trials: int
    e_k: float
    mean: float
    min: float
    max: float
    stderr: float
    projection_mean: float
    bound: Optional[float]
    tail_bound: Optional[float]
    wall_time: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def run_error_benchmark(
    a: Tensor3,
    ks: Sequence[int],
    qs: Sequence[int],
    *,
    p: int = 10,
    trials: int = 20,
    seed: int = 0,
    delta: Optional[float] = None,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> List[BenchRow]:
    """
    One row per (k, q). Errors are relative to ||A||_F; bound columns are the
    relative expected and tail bounds (None when p < 2 after clamping).
    wall_time is the mean seconds per randomized decomposition.
    """
    delta = float(DEFAULT_CONFIG["delta"] if delta is None else delta)
    spec = singular_spectrum(a, executor=executor, exploit_symmetry=exploit_symmetry)
    rows: List[BenchRow] = []
    for k in ks:
        e_k = relative_optimal_error(spec, k)
        for q in qs:
            realized, projected, seconds = [], [], []
            report = None
            for trial in range(trials):
                cfg = SketchConfig(k=k, p=p, q=q, seed=(seed, k, q, trial))
                t0 = time.perf_counter()
                _, report = rtsvd_subspace(
                    a, cfg, executor=executor, exploit_symmetry=exploit_symmetry, spectrum=spec, delta=delta
                )
                seconds.append(time.perf_counter() - t0)
                realized.append(report.realized)
                projected.append(report.projection)
            errs = np.asarray(realized)
            row = BenchRow(
                k=k,
                q=q,
                p=report.p,
                trials=trials,
                e_k=e_k,
                mean=float(errs.mean()),
                min=float(errs.min()),
                max=float(errs.max()),
                stderr=float(errs.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0,
                projection_mean=float(np.mean(projected)),
                bound=report.expected_bound_relative,
                tail_bound=report.tail_bound_relative,
                wall_time=float(np.mean(seconds)),
            )
            rows.append(row)
            log_event("bench.row.completed", {"k": k, "q": q, "e_k": e_k, "mean": row.mean})
    return rows
