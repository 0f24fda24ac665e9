# rtsvd/sketch.py
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import ConfigError, InvalidEpsilon, IterationVectorLength, RankOutOfRange
from .observability import log_event

logger = logging.getLogger(__name__)

IterationCount = Union[int, Tuple[int, ...]]


@dataclass(frozen=True)
class SketchConfig:
    """
    Parameters of one randomized run.

    q is either one iteration count for every Fourier slice or a vector of
    length n3. seed may be an int, a sequence of ints or a numpy Generator.
    """

    k: int
    p: int = 10
    q: IterationCount = 0
    eps: Optional[float] = None
    seed: Any = 0
    q_max: int = int(DEFAULT_CONFIG["q_max"])

    def __post_init__(self) -> None:
        if self.k < 1:
            raise RankOutOfRange(f"k must be >= 1, got {self.k}")
        if self.p < 0:
            raise ConfigError(f"oversampling p must be >= 0, got {self.p}")
        q = self.q
        if isinstance(q, (list, tuple, np.ndarray)):
            q = tuple(int(x) for x in q)
            if any(x < 0 for x in q):
                raise ConfigError(f"iteration counts must be >= 0, got {q}")
        else:
            q = int(q)
            if q < 0:
                raise ConfigError(f"iteration count must be >= 0, got {q}")
        object.__setattr__(self, "q", q)
        if self.eps is not None and not 0.0 < self.eps < 1.0:
            raise InvalidEpsilon(f"eps must lie in (0, 1), got {self.eps}")
        if self.q_max < 0:
            raise ConfigError(f"q_max must be >= 0, got {self.q_max}")

    @property
    def l(self) -> int:
        return self.k + self.p

    def q_vector(self, n3: int) -> np.ndarray:
        """Per-slice iteration counts; mirrored Fourier slices must agree."""
        if isinstance(self.q, tuple):
            if len(self.q) != n3:
                raise IterationVectorLength(f"iteration vector has length {len(self.q)}, tensor has n3={n3}")
            qv = np.asarray(self.q, dtype=np.int64)
        else:
            qv = np.full(n3, self.q, dtype=np.int64)
        for i in range(1, n3):
            if qv[i] != qv[n3 - i]:
                raise IterationVectorLength(
                    f"conjugate slices {i} and {n3 - i} (0-based) need equal iteration counts, "
                    f"got {int(qv[i])} and {int(qv[n3 - i])}"
                )
        return qv

    def with_q(self, q: Union[IterationCount, Sequence[int], np.ndarray]) -> "SketchConfig":
        return replace(self, q=q)

    def clamp(self, n1: int, n2: int) -> "SketchConfig":
        """Reduce p so that k + p <= min(n1, n2); k itself must already fit."""
        m = min(n1, n2)
        if self.k > m:
            raise RankOutOfRange(f"truncation term k={self.k} exceeds min(n1, n2)={m}")
        if self.k + self.p <= m:
            return self
        p_new = m - self.k
        logger.warning("oversampling reduced from p=%d to p=%d so that k+p <= %d", self.p, p_new, m)
        log_event("decompose.sketch.clamped", {"k": self.k, "p_requested": self.p, "p_used": p_new})
        return replace(self, p=p_new)
