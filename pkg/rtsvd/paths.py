# rtsvd/paths.py
from __future__ import annotations

import os
from pathlib import Path
from typing import Union

PathLike = Union[str, Path]

# rtsvd/ sits at the repo root
REPO_ROOT: Path = Path(__file__).resolve().parents[1]

RUNTIME_DIR_ENV = "RTSVD_RUNTIME_DIR"


def runtime_data_dir() -> Path:
    """Return the runtime data dir (env override first) and ensure it exists."""
    override = os.environ.get(RUNTIME_DIR_ENV)
    base = Path(override) if override else REPO_ROOT / "runtime_data"
    base.mkdir(parents=True, exist_ok=True)
    return base


def logs_dir() -> Path:
    p = runtime_data_dir() / "logs"
    p.mkdir(parents=True, exist_ok=True)
    return p


def observability_dir() -> Path:
    p = runtime_data_dir() / "observability"
    p.mkdir(parents=True, exist_ok=True)
    return p


def events_ledger_path() -> Path:
    """Path to the run ledger (append-only)."""
    return runtime_data_dir() / "events.jsonl"


def observability_events_path() -> Path:
    return observability_dir() / "observability_events.jsonl"


def get_log_file(name: str = "rtsvd.log") -> Path:
    return logs_dir() / name


def ensure_parent(path: PathLike) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p
