# rtsvd/bounds.py
"""
Error bounds for the randomized decompositions, evaluated as numbers.

Conventions:
- Tensor bounds take a complete spectrum (TSVDFactors from the exact t-SVD,
  or a Spectrum) and a SketchConfig; values are absolute Frobenius norms.
- Matrix forms take a 1-d array of singular values in descending order.
- tau**(4q) follows 0**0 == 1: a zero gap with q = 0 keeps the full factor.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import InvalidDelta, OversamplingTooSmall, RankDeficientSketch, RankOutOfRange
from .sketch import SketchConfig
from .tsvd import SpectrumLike, as_spectrum, relative_optimal_error

C_DELTA_VARIANTS = ("natural", "base10")


def _require_oversampling(p: int) -> None:
    if p < 2:
        raise OversamplingTooSmall(f"expected-error bounds need p >= 2, got p={p}")


def _require_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise InvalidDelta(f"failure probability delta must lie in (0, 1), got {delta}")


def _gap_power(tau: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.power(np.asarray(tau, dtype=np.float64), 4 * np.asarray(q, dtype=np.float64))


def _matrix_gap(sigma: np.ndarray, k: int) -> float:
    if k < len(sigma) and sigma[k - 1] > 0:
        return float(sigma[k] / sigma[k - 1])
    return 0.0


def _matrix_sigma(sigma: Sequence[float], k: int) -> np.ndarray:
    s = np.asarray(sigma, dtype=np.float64).ravel()
    if not 1 <= k <= len(s):
        raise RankOutOfRange(f"k={k} must lie in [1, {len(s)}]")
    return s


# ---------------------------------------------------------------------------
# Tensor bounds
# ---------------------------------------------------------------------------


def bound_expected(f: SpectrumLike, cfg: SketchConfig) -> float:
    """
    sqrt((1/n3) * sum_i (1 + k/(p-1) * tau_i^(4 q_i)) * tail_i), tail_i the
    squared singular values of Fourier slice i beyond k. With q = 0 this is
    sqrt(1 + k/(p-1)) times the optimal error.
    """
    _require_oversampling(cfg.p)
    spec = as_spectrum(f)
    k = cfg.k
    factor = 1.0 + (k / (cfg.p - 1)) * _gap_power(spec.tau(k), cfg.q_vector(spec.n3))
    return float(np.sqrt(np.sum(factor * spec.tail_energy(k)) / spec.n3))


def bound_expected_uniform(f: SpectrumLike, cfg: SketchConfig) -> float:
    """Looser single-gap form: the largest per-slice gap and the smallest iteration count."""
    _require_oversampling(cfg.p)
    spec = as_spectrum(f)
    k = cfg.k
    tau_max = float(np.max(spec.tau(k)))
    q_min = int(np.min(cfg.q_vector(spec.n3)))
    optimal = float(np.sqrt(spec.tail_energy(k).sum() / spec.n3))
    return math.sqrt(1.0 + (k / (cfg.p - 1)) * tau_max ** (4 * q_min)) * optimal


def bound_rapid_decay(f: SpectrumLike, cfg: SketchConfig) -> float:
    """Estimate for rapidly decaying spectra: sqrt(1 + k/(p-1)) * max_i sigma_hat[i, k]."""
    _require_oversampling(cfg.p)
    spec = as_spectrum(f)
    k = cfg.k
    if k >= spec.sigma_hat.shape[1]:
        return 0.0
    return math.sqrt(1.0 + cfg.k / (cfg.p - 1)) * float(np.max(spec.sigma_hat[:, k]))


def bound_gradual_decay(f: SpectrumLike, cfg: SketchConfig) -> float:
    """Upper bound using tail_i <= (m - k) * sigma_hat[i, k]^2, m = min(n1, n2)."""
    _require_oversampling(cfg.p)
    spec = as_spectrum(f)
    k = cfg.k
    m = min(spec.n1, spec.n2)
    if k >= spec.sigma_hat.shape[1]:
        return 0.0
    tail = (m - k) * spec.sigma_hat[:, k] ** 2
    return math.sqrt(1.0 + k / (cfg.p - 1)) * float(np.sqrt(tail.sum() / spec.n3))


def c_delta(n2: int, k: int, p: int, delta: float, variant: str = "natural") -> float:
    """
    Constant of the tail bound.

    "natural": (e sqrt(k+p)/(p+1)) (2/delta)^(1/(p+1)) (sqrt(n2-k) + sqrt(k+p) + sqrt(2 ln(2/delta))).
    "base10": the same expression without the leading e and with a base-10
    logarithm; about 42.5 at n2=100, k=30, p=20, delta=1e-16, against
    about 132 for "natural".
    """
    _require_delta(delta)
    if p < 0:
        raise OversamplingTooSmall(f"p must be >= 0, got {p}")
    if not 1 <= k <= n2:
        raise RankOutOfRange(f"k={k} must lie in [1, n2={n2}]")
    if variant not in C_DELTA_VARIANTS:
        raise ValueError(f"variant must be one of {C_DELTA_VARIANTS}, got {variant!r}")
    l = k + p
    if variant == "natural":
        lead, log = math.e, math.log
    else:
        lead, log = 1.0, math.log10
    return (
        lead
        * math.sqrt(l)
        / (p + 1)
        * (2.0 / delta) ** (1.0 / (p + 1))
        * (math.sqrt(n2 - k) + math.sqrt(l) + math.sqrt(2.0 * log(2.0 / delta)))
    )


def tail_bound(
    f: SpectrumLike,
    cfg: SketchConfig,
    delta: float,
    *,
    variant: str = "natural",
) -> Tuple[float, float]:
    """
    Bound exceeded with probability at most delta:
    sqrt((1/n3) * sum_i (1 + C_delta^2 * tau_i^(4 q_i)) * tail_i). Returns (bound, C_delta).

    variant selects the C_delta form (see c_delta). The reference constant of
    about 42.5 at n2=100, k=30, p=20, delta=1e-16 comes from variant="base10";
    the default "natural" gives about 131.8 there and is the looser bound.
    """
    spec = as_spectrum(f)
    k = cfg.k
    cd = c_delta(spec.n2, k, cfg.p, delta, variant)
    factor = 1.0 + cd**2 * _gap_power(spec.tau(k), cfg.q_vector(spec.n3))
    return float(np.sqrt(np.sum(factor * spec.tail_energy(k)) / spec.n3)), cd


# ---------------------------------------------------------------------------
# Matrix bounds
# ---------------------------------------------------------------------------


def matrix_expected_bound(sigma: Sequence[float], k: int, p: int, q: int = 0) -> float:
    """sqrt((1 + k/(p-1) * tau^(4q)) * sum_{j>k} sigma_j^2); its square bounds E||A - QQ^H A||_F^2."""
    _require_oversampling(p)
    s = _matrix_sigma(sigma, k)
    tau = _matrix_gap(s, k)
    return math.sqrt((1.0 + (k / (p - 1)) * tau ** (4 * q)) * float(np.sum(s[k:] ** 2)))


def subspace_bound_simplified(sigma: Sequence[float], k: int, p: int, q: int, n: Optional[int] = None) -> float:
    """sqrt(sum_{j>k} sigma_j^2 + k tau^(4q) (n-k)/(p-1) sigma_{k+1}^2), n the column count."""
    _require_oversampling(p)
    s = _matrix_sigma(sigma, k)
    n = len(s) if n is None else int(n)
    tau = _matrix_gap(s, k)
    head = float(np.sum(s[k:] ** 2))
    sk1 = float(s[k]) if k < len(s) else 0.0
    return math.sqrt(head + k * tau ** (4 * q) * (n - k) / (p - 1) * sk1**2)


def gu_constant(n: int, k: int, p: int) -> float:
    """C = (sqrt(n-k) + sqrt(k+p) + 7) * (4 e sqrt(k+p)/(p+1))."""
    return (math.sqrt(n - k) + math.sqrt(k + p) + 7.0) * (4.0 * math.e * math.sqrt(k + p) / (p + 1))


def gu_subspace_bound(sigma: Sequence[float], k: int, p: int, q: int, n: Optional[int] = None) -> float:
    """The competing subspace-iteration bound with C^2 in place of 1/(p-1)."""
    s = _matrix_sigma(sigma, k)
    n = len(s) if n is None else int(n)
    tau = _matrix_gap(s, k)
    head = float(np.sum(s[k:] ** 2))
    sk1 = float(s[k]) if k < len(s) else 0.0
    return math.sqrt(head + k * tau ** (4 * q) * (n - k) * gu_constant(n, k, p) ** 2 * sk1**2)


def structural_error_bound(a: np.ndarray, w: np.ndarray, k: int, q: int) -> float:
    """
    Deterministic bound on ||(I - QQ^H) a||_F^2 for Q from q rounds of subspace
    iteration started at the sketch a @ w:

        ||Sigma_2||_F^2 + tau^(4q) ||Sigma_2 W_2 pinv(W_1)||_F^2

    where W_1 = V_1^H w, W_2 = V_2^H w from the full SVD of a.
    """
    a = np.asarray(a)
    w = np.asarray(w)
    if w.shape[0] != a.shape[1]:
        raise RankOutOfRange(f"sketch has {w.shape[0]} rows, matrix has {a.shape[1]} columns")
    _, s, vh = scipy.linalg.svd(a, full_matrices=True)
    if not 1 <= k <= len(s):
        raise RankOutOfRange(f"k={k} must lie in [1, {len(s)}]")
    v = np.conj(vh.T)
    w1 = np.conj(v[:, :k].T) @ w
    w2 = np.conj(v[:, k:].T) @ w
    if np.linalg.matrix_rank(w1) < k:
        raise RankDeficientSketch(f"V_1^H W has rank {np.linalg.matrix_rank(w1)} < k={k}; draw a new sketch")
    tail = s[k:]
    s2w2 = tail[:, None] * w2[: len(tail)]
    tau = _matrix_gap(s, k)
    mixed = float(np.linalg.norm(s2w2 @ np.linalg.pinv(w1)) ** 2)
    return float(np.sum(tail**2)) + tau ** (4 * q) * mixed


def flop_estimate(dims: Tuple[int, int, int], k: int, p: int = 0, q: Any = 0, method: str = "rtsvd") -> int:
    """
    Leading-order operation count.

    tsvd: n1 n2 n3 log2(n3) for the transform plus n1 n2 n3 min(n1, n2).
    rtsvd / rtsvd-q: transform plus sum_i (1 + 2 q_i) n1 n2 (k + p).

    A q vector must have length n3 and agree on mirrored slices
    (IterationVectorLength).
    """
    n1, n2, n3 = dims
    transform = n1 * n2 * n3 * math.log2(max(n3, 2))
    if method == "tsvd":
        return int(transform + n1 * n2 * n3 * min(n1, n2))
    q = tuple(int(x) for x in np.ravel(q)) if np.ndim(q) else int(q)
    qv = SketchConfig(k=k, p=p, q=q).q_vector(n3)
    passes = int(np.sum(1 + 2 * qv))
    return int(transform + passes * n1 * n2 * (k + p))


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ErrorReport:
    """
    realized / projection / optimal are relative to ||A||_F; expected_bound
    and tail_bound are absolute, with *_relative companions. The expected
    bound is None when p < 2.
    """

    k: int
    p: int
    q: Tuple[int, ...]
    norm: float
    realized: float
    projection: float
    optimal: float
    expected_bound: Optional[float]
    expected_bound_relative: Optional[float]
    tail_bound: Optional[float]
    tail_bound_relative: Optional[float]
    c_delta: Optional[float]
    delta: float
    tau: Tuple[float, ...]

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["q"] = list(self.q)
        d["tau"] = list(self.tau)
        return d


def build_error_report(
    f: SpectrumLike,
    cfg: SketchConfig,
    *,
    realized_sq: np.ndarray,
    projection_sq: np.ndarray,
    delta: float,
) -> ErrorReport:
    """Assemble a report from per-Fourier-slice squared residuals and the exact spectrum."""
    _require_delta(delta)
    spec = as_spectrum(f)
    n3 = spec.n3
    norm = spec.norm()

    def _rel(x: float) -> float:
        return x / norm if norm > 0 else 0.0

    realized = math.sqrt(max(float(np.sum(realized_sq)), 0.0) / n3)
    projection = math.sqrt(max(float(np.sum(projection_sq)), 0.0) / n3)
    expected = bound_expected(spec, cfg) if cfg.p >= 2 else None
    tail, cd = tail_bound(spec, cfg, delta)
    return ErrorReport(
        k=cfg.k,
        p=cfg.p,
        q=tuple(int(x) for x in cfg.q_vector(n3)),
        norm=norm,
        realized=_rel(realized),
        projection=_rel(projection),
        optimal=relative_optimal_error(spec, cfg.k),
        expected_bound=expected,
        expected_bound_relative=None if expected is None else _rel(expected),
        tail_bound=tail,
        tail_bound_relative=None if tail is None else _rel(tail),
        c_delta=cd,
        delta=delta,
        tau=tuple(float(t) for t in spec.tau(cfg.k)),
    )
