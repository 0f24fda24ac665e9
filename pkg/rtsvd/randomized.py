# rtsvd/randomized.py
"""
Randomized decompositions.

Matrix level: the randomized range finder with optional subspace iteration
and the r-SVD built on it. Tensor level: rt-SVD and rt-SVD with per-slice
subspace iteration, both run slice-wise in the Fourier domain.

Random draws: one generator per run. The Gaussian random tensor has a
single nonzero frontal slice, so every Fourier slice of the sketch is that
same real matrix; it is drawn once and shared read-only by all slice tasks.
"""
from __future__ import annotations

import math
from typing import Any, NamedTuple, Optional, Tuple

import numpy as np

from .algebra import to_spatial
from .bounds import ErrorReport, build_error_report
from .config import DEFAULT_CONFIG
from .errors import InvalidEpsilon, OversamplingTooSmall, RankOutOfRange
from .linalg import as_slice, project_svd, range_finder
from .observability import log_event
from .sketch import SketchConfig
from .tensor import Tensor3, fft_mode3, half_indices, is_self_conjugate, map_spectrum, stack_slices
from .tsvd import Spectrum, SpectrumLike, TSVDFactors, as_spectrum, singular_spectrum

__all__ = [
    "RSVDResult",
    "SketchConfig",
    "choose_iterations",
    "gaussian_random_tensor",
    "iterations_for_gaps",
    "rsvd_matrix",
    "rtsvd",
    "rtsvd_subspace",
    "subspace_range_matrix",
]


class RSVDResult(NamedTuple):
    """a ~= u @ diag(s) @ v^H with k columns."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def smat(self) -> np.ndarray:
        return np.diag(self.s)


def _gaussian_block(n: int, l: int, seed: Any) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal((n, l))


def gaussian_random_tensor(n2: int, l: int, n3: int, seed: Any = 0) -> Tensor3:
    """First frontal slice i.i.d. standard normal, all other slices zero."""
    data = np.zeros((n2, l, n3))
    data[:, :, 0] = _gaussian_block(n2, l, seed)
    return Tensor3(data)


def _check_matrix_sketch(a: np.ndarray, k: int, p: int) -> None:
    m, n = a.shape
    if k < 1 or p < 0 or k + p > min(m, n):
        raise RankOutOfRange(f"need 1 <= k and k + p <= min(m, n) = {min(m, n)}, got k={k}, p={p}")


def subspace_range_matrix(a: np.ndarray, k: int, p: int, q: int = 0, seed: Any = 0) -> np.ndarray:
    """Orthonormal m x (k+p) basis from q rounds of subspace iteration; q = 0 is the plain range finder."""
    a = np.asarray(a)
    _check_matrix_sketch(a, k, p)
    if q < 0:
        raise ValueError(f"q must be >= 0, got {q}")
    return range_finder(a, _gaussian_block(a.shape[1], k + p, seed), q)


def rsvd_matrix(a: np.ndarray, k: int, p: int, seed: Any = 0, q: int = 0) -> RSVDResult:
    a = np.asarray(a)
    qmat = subspace_range_matrix(a, k, p, q, seed)
    u, s, v = project_svd(a, qmat, k)
    return RSVDResult(u, s[:k], v)


def _slice_residuals(ai: np.ndarray, qmat: np.ndarray, u: np.ndarray, s: np.ndarray, v: np.ndarray) -> Tuple[float, float]:
    """Squared Frobenius residuals (rank-k factors, projection onto range(qmat))."""
    realized = ai - (u * s) @ np.conj(v.T)
    projected = ai - qmat @ (np.conj(qmat.T) @ ai)
    return float(np.linalg.norm(realized) ** 2), float(np.linalg.norm(projected) ** 2)


def rtsvd_subspace(
    a: Tensor3,
    cfg: SketchConfig,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
    spectrum: Optional[Spectrum] = None,
    delta: Optional[float] = None,
    with_report: bool = True,
) -> Tuple[TSVDFactors, Optional[ErrorReport]]:
    """
    rt-SVD with q_i rounds of subspace iteration on Fourier slice i.

    spectrum is the exact singular spectrum of a (computed when omitted) and
    feeds the error report; pass it in when decomposing the same tensor many
    times. with_report=False skips the report (returned as None) and the
    exact spectrum it needs.
    """
    n1, n2, n3 = a.dims
    cfg = cfg.clamp(n1, n2)
    k = cfg.k
    qv = cfg.q_vector(n3)
    delta = float(DEFAULT_CONFIG["delta"] if delta is None else delta)
    omega = gaussian_random_tensor(n2, cfg.l, n3, cfg.seed).frontal(0)
    fa = fft_mode3(a).slices

    def _slice(i: int):
        ai = as_slice(fa[:, :, i], is_self_conjugate(i, n3))
        qmat = range_finder(ai, omega, int(qv[i]))
        u, s, v = project_svd(ai, qmat, k)
        realized, projected = _slice_residuals(ai, qmat, u, s[:k], v)
        return u, s, v, realized, projected

    out = map_spectrum(_slice, n3, executor=executor, exploit_symmetry=exploit_symmetry)
    method = "rtsvd-q" if np.any(qv > 0) else "rtsvd"
    factors = TSVDFactors(
        u=to_spatial(stack_slices([r[0] for r in out])),
        s=to_spatial(stack_slices([np.diag(r[1][:k]) for r in out])),
        v=to_spatial(stack_slices([r[2] for r in out])),
        k=k,
        sigma_hat=np.vstack([r[1] for r in out]),
        method=method,
    )
    if not with_report:
        log_event(f"decompose.{method}.completed", {"dims": [n1, n2, n3], "k": k, "p": cfg.p})
        return factors, None
    if spectrum is None:
        spectrum = singular_spectrum(a, executor=executor, exploit_symmetry=exploit_symmetry)
    report = build_error_report(
        spectrum,
        cfg,
        realized_sq=np.array([r[3] for r in out]),
        projection_sq=np.array([r[4] for r in out]),
        delta=delta,
    )
    log_event(
        f"decompose.{method}.completed",
        {"dims": [n1, n2, n3], "k": k, "p": cfg.p, "q": [int(x) for x in qv], "realized": report.realized},
    )
    return factors, report


def rtsvd(
    a: Tensor3,
    cfg: SketchConfig,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
    spectrum: Optional[Spectrum] = None,
    delta: Optional[float] = None,
    with_report: bool = True,
) -> Tuple[TSVDFactors, Optional[ErrorReport]]:
    """rt-SVD without subspace iteration; any q in cfg is ignored."""
    return rtsvd_subspace(
        a,
        cfg.with_q(0),
        executor=executor,
        exploit_symmetry=exploit_symmetry,
        spectrum=spectrum,
        delta=delta,
        with_report=with_report,
    )


def iterations_for_gaps(tau: np.ndarray, k: int, p: int, eps: float, q_max: Optional[int] = None) -> np.ndarray:
    """
    q_i = ceil((1/4) * log(eps (p-1) / k) / log tau_i), floored at 0.
    tau_i = 0 gives 0; tau_i >= 1 - 1e-12 gives q_max.
    """
    if p < 2:
        raise OversamplingTooSmall(f"the iteration rule needs p >= 2, got p={p}")
    if not 0.0 < eps < 1.0:
        raise InvalidEpsilon(f"eps must lie in (0, 1), got {eps}")
    q_max = int(DEFAULT_CONFIG["q_max"] if q_max is None else q_max)
    target = math.log(eps * (p - 1) / k)
    out = np.zeros(len(tau), dtype=np.int64)
    for i, t in enumerate(np.asarray(tau, dtype=np.float64)):
        if t <= 0.0:
            out[i] = 0
        elif t >= 1.0 - 1e-12:
            out[i] = q_max
        else:
            out[i] = max(0, math.ceil(0.25 * target / math.log(t)))
    return out


def choose_iterations(
    f: SpectrumLike,
    k: int,
    p: int,
    eps: float,
    *,
    q_max: Optional[int] = None,
) -> np.ndarray:
    """Per-slice iteration vector from the gaps tau_k of f; mirrored slices share their count."""
    spec = as_spectrum(f)
    n3 = spec.n3
    half = list(half_indices(n3))
    q_half = iterations_for_gaps(spec.tau(k)[half], k, p, eps, q_max)
    qv = np.empty(n3, dtype=np.int64)
    qv[half] = q_half
    for i in range(n3 // 2 + 1, n3):
        qv[i] = qv[n3 - i]
    return qv
