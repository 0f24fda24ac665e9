# tests/conftest.py
from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from rtsvd import trace_context
from rtsvd.tensor import Tensor3


@pytest.fixture(autouse=True)
def runtime_dir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Every test writes runtime_data into its own tmp dir and starts without a run context."""
    d = tmp_path / "runtime_data"
    monkeypatch.setenv("RTSVD_RUNTIME_DIR", str(d))
    monkeypatch.delenv("RTSVD_WORKERS", raising=False)
    trace_context.clear_run_context()
    yield d
    trace_context.clear_run_context()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def random_tensor3(rng: np.random.Generator):
    def _make(n1: int, n2: int, n3: int) -> Tensor3:
        return Tensor3(rng.standard_normal((n1, n2, n3)))

    return _make
