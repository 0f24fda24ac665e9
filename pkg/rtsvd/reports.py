# rtsvd/reports.py
"""
Result files. JSON is written with sorted keys so that equal results give
equal bytes; CSV has a header row, '.' decimals and 6 significant digits.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

from .benchmark import BenchRow
from .bounds import ErrorReport
from .crossval import CVReport
from .paths import PathLike, ensure_parent

BENCH_COLUMNS = (
    "k",
    "q",
    "p",
    "trials",
    "e_k",
    "mean",
    "min",
    "max",
    "stderr",
    "projection_mean",
    "bound",
    "tail_bound",
    "wall_time",
)


def fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def write_json(path: PathLike, obj: Any) -> Path:
    p = ensure_parent(path)
    p.write_text(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return p


def _write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    p = ensure_parent(path)
    with p.open("w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return p


def write_bench(rows: List[BenchRow], path: PathLike, fmt_name: str = "csv") -> Path:
    if fmt_name == "json":
        return write_json(path, [r.to_dict() for r in rows])
    body = [[fmt(getattr(r, c)) for c in BENCH_COLUMNS] for r in rows]
    return _write_csv(path, BENCH_COLUMNS, body)


def recognition_table(report: CVReport) -> List[List[str]]:
    """Rows mean/min/max per method, one column per fold."""
    out = []
    for method in report.methods:
        results = report.for_method(method)
        for stat in ("mean", "min", "max"):
            out.append([method, stat] + [fmt(getattr(r, stat)) for r in results])
    return out


def write_recognition_table(report: CVReport, path: PathLike) -> Path:
    header = ["method", "stat"] + [f"fold_{f + 1}" for f in range(report.folds)]
    return _write_csv(path, header, recognition_table(report))


def write_cv_rates(report: CVReport, path: PathLike, fmt_name: str = "csv") -> Path:
    """Raw per-fold per-trial rates."""
    if fmt_name == "json":
        return write_json(path, report.to_dict())
    body = []
    for r in sorted(report.results, key=lambda r: (report.methods.index(r.method), r.fold)):
        for trial, rate in enumerate(r.rates):
            body.append([r.method, str(r.fold + 1), str(trial + 1), fmt(rate)])
    return _write_csv(path, ("method", "fold", "trial", "rate"), body)


def write_error_report(report: ErrorReport, path: PathLike, **extra: Any) -> Path:
    payload = report.to_dict()
    payload.update(extra)
    return write_json(path, payload)


def timing_path(path: PathLike) -> Path:
    """Companion file for wall-clock timings: report.json -> report_timing.json."""
    p = Path(path)
    return p.with_name(f"{p.stem}_timing.json")
