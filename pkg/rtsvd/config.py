# rtsvd/config.py
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from .errors import ConfigError
from .paths import PathLike

WORKERS_ENV = "RTSVD_WORKERS"

METHODS = ("tsvd", "rtsvd", "rtsvd-q")
FORMATS = ("csv", "json")

DEFAULT_CONFIG: Dict[str, Any] = {
    "schema_version": 1,
    "workers": 1,
    "p": 10,
    "q": [0],
    "eps": None,
    "delta": 0.01,
    "seed": 0,
    "method": "rtsvd",
    "methods": list(METHODS),
    "trials": 20,
    "folds": 10,
    "format": "csv",
    "q_max": 20,
    "tol": 1e-10,
    "dense_budget": 4_000_000,
    "exploit_symmetry": True,
    "standardize": False,
}


def load_config(path: Optional[PathLike] = None) -> Dict[str, Any]:
    """
    Load a JSON config file and fill missing keys from DEFAULT_CONFIG.
    No path returns a copy of the defaults.
    """
    cfg = dict(DEFAULT_CONFIG)
    if path is None:
        return cfg
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        with p.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {p} must hold a JSON object")
    unknown = sorted(set(data) - set(DEFAULT_CONFIG) - {"k", "input", "out"})
    if unknown:
        raise ConfigError(f"unknown config keys in {p}: {unknown}")
    cfg.update(data)
    return cfg


def resolve_workers(flag: Optional[int] = None, file_value: Optional[int] = None) -> int:
    """Worker count precedence: flag > config file > RTSVD_WORKERS > default."""
    if flag is not None:
        return int(flag)
    if file_value is not None:
        return int(file_value)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from exc
    return int(DEFAULT_CONFIG["workers"])


def parse_int_list(value: Any) -> Tuple[int, ...]:
    """Accept 5, "5", "0,1,2", [0, 1, 2]."""
    if value is None:
        return ()
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    if isinstance(value, int):
        return (value,)
    try:
        return tuple(int(v) for v in str(value).split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a comma separated integer list, got {value!r}") from exc


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    out: Optional[str] = None
    k: Tuple[int, ...] = ()
    p: int = 10
    q: Tuple[int, ...] = (0,)
    eps: Optional[float] = None
    delta: float = 0.01
    seed: int = 0
    workers: int = 1
    method: str = "rtsvd"
    methods: Tuple[str, ...] = METHODS
    trials: int = 20
    folds: int = 10
    format: str = "csv"
    q_max: int = 20
    tol: float = 1e-10
    dense_budget: int = 4_000_000
    exploit_symmetry: bool = True
    standardize: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(k < 1 for k in self.k):
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.p < 0:
            raise ConfigError(f"p must be >= 0, got {self.p}")
        if any(q < 0 for q in self.q):
            raise ConfigError(f"q entries must be >= 0, got {self.q}")
        if self.eps is not None and not 0.0 < self.eps < 1.0:
            raise ConfigError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")
        for m in (self.method, *self.methods):
            if m not in METHODS:
                raise ConfigError(f"method must be one of {METHODS}, got {m!r}")

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d.pop("extra", None)
        return d
