# rtsvd/tsvd.py
"""
Deterministic t-SVD: full and k-term truncated factorizations computed
slice-wise in the Fourier domain, and the minimal truncation error they
certify.

sigma_hat keeps every singular value of every Fourier slice (n3 rows,
min(n1, n2) columns) even when the factors are truncated; the error and
bound formulas sum over the tail j > k.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from .algebra import to_spatial, tprod, ttranspose
from .errors import IncompleteSpectrum, RankOutOfRange
from .linalg import as_slice, svd_econ
from .observability import log_event
from .tensor import Tensor3, fft_mode3, is_self_conjugate, map_spectrum, stack_slices


def _check_rank(k: int, limit: int, *, allow_zero: bool = False) -> None:
    lo = 0 if allow_zero else 1
    if not lo <= k <= limit:
        raise RankOutOfRange(f"truncation term k={k} must lie in [{lo}, {limit}]")


def gap_ratios(sigma_hat: np.ndarray, k: int) -> np.ndarray:
    """Per-slice sigma_{k+1} / sigma_k; 0 where sigma_k = 0 or no (k+1)-th value exists."""
    n3, m = sigma_hat.shape
    _check_rank(k, m)
    sk = sigma_hat[:, k - 1]
    sk1 = sigma_hat[:, k] if k < m else np.zeros(n3)
    out = np.zeros(n3)
    nz = sk > 0
    out[nz] = sk1[nz] / sk[nz]
    return out


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Singular values of the Fourier slices of an n1 x n2 x n3 tensor."""

    sigma_hat: np.ndarray
    n1: int
    n2: int

    def __post_init__(self) -> None:
        sig = np.array(self.sigma_hat, dtype=np.float64, ndmin=2, copy=True)
        sig.flags.writeable = False
        object.__setattr__(self, "sigma_hat", sig)

    @property
    def n3(self) -> int:
        return int(self.sigma_hat.shape[0])

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.n1, self.n2, self.n3

    @property
    def complete(self) -> bool:
        return self.sigma_hat.shape[1] == min(self.n1, self.n2)

    def tau(self, k: int) -> np.ndarray:
        return gap_ratios(self.sigma_hat, k)

    def tail_energy(self, k: int) -> np.ndarray:
        """Per-slice sum of squared singular values beyond k."""
        if not self.complete:
            raise IncompleteSpectrum(
                f"spectrum carries {self.sigma_hat.shape[1]} singular values per slice; "
                f"tail sums need min(n1, n2) = {min(self.n1, self.n2)}"
            )
        _check_rank(k, self.sigma_hat.shape[1], allow_zero=True)
        return np.sum(self.sigma_hat[:, k:] ** 2, axis=1)

    def norm(self) -> float:
        """||A||_F recovered through the Parseval identity."""
        return float(np.sqrt(self.tail_energy(0).sum() / self.n3))


@dataclass(frozen=True, eq=False)
class TSVDFactors:
    u: Tensor3
    s: Tensor3
    v: Tensor3
    k: int
    sigma_hat: np.ndarray
    method: str = "tsvd"

    def __post_init__(self) -> None:
        sig = np.array(self.sigma_hat, dtype=np.float64, copy=True)
        sig.flags.writeable = False
        object.__setattr__(self, "sigma_hat", sig)

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.u.n1, self.v.n1, self.u.n3

    @property
    def spectrum(self) -> Spectrum:
        return Spectrum(self.sigma_hat, self.u.n1, self.v.n1)

    @property
    def complete(self) -> bool:
        return self.spectrum.complete

    def tau(self, k: Optional[int] = None) -> np.ndarray:
        return self.spectrum.tau(self.k if k is None else int(k))

    def tail_energy(self, k: Optional[int] = None) -> np.ndarray:
        return self.spectrum.tail_energy(self.k if k is None else int(k))

    def norm(self) -> float:
        return self.spectrum.norm()


SpectrumLike = Union[TSVDFactors, Spectrum]


def as_spectrum(f: SpectrumLike) -> Spectrum:
    return f.spectrum if isinstance(f, TSVDFactors) else f


def singular_spectrum(
    a: Tensor3,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> Spectrum:
    """All singular values of every Fourier slice, without singular vectors."""
    fa = fft_mode3(a).slices
    n3 = a.n3

    def _slice(i: int) -> np.ndarray:
        return scipy.linalg.svdvals(as_slice(fa[:, :, i], is_self_conjugate(i, n3)))

    rows = map_spectrum(_slice, n3, executor=executor, exploit_symmetry=exploit_symmetry)
    return Spectrum(np.vstack(rows), a.n1, a.n2)


def tsvd_truncated(
    a: Tensor3,
    k: int,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> TSVDFactors:
    n1, n2, n3 = a.dims
    _check_rank(k, min(n1, n2))
    fa = fft_mode3(a).slices

    def _slice(i: int):
        u, s, v = svd_econ(as_slice(fa[:, :, i], is_self_conjugate(i, n3)))
        return u[:, :k], s, v[:, :k]

    out = map_spectrum(_slice, n3, executor=executor, exploit_symmetry=exploit_symmetry)
    factors = TSVDFactors(
        u=to_spatial(stack_slices([u for u, _, _ in out])),
        s=to_spatial(stack_slices([np.diag(s[:k]) for _, s, _ in out])),
        v=to_spatial(stack_slices([v for _, _, v in out])),
        k=k,
        sigma_hat=np.vstack([s for _, s, _ in out]),
        method="tsvd",
    )
    log_event("decompose.tsvd.completed", {"dims": [n1, n2, n3], "k": k})
    return factors


def full_tsvd(a: Tensor3, **kwargs: Any) -> TSVDFactors:
    return tsvd_truncated(a, min(a.n1, a.n2), **kwargs)


def reconstruct(f: TSVDFactors) -> Tensor3:
    """U * S * V^T."""
    return tprod(f.u, tprod(f.s, ttranspose(f.v)))


def optimal_error(f: SpectrumLike, k: Optional[int] = None) -> float:
    """
    Minimal Frobenius error of any tubal-rank-k approximation:
    sqrt((1/n3) * sum_i sum_{j>k} sigma_hat[i, j]^2).
    """
    spec = as_spectrum(f)
    if k is None:
        if not isinstance(f, TSVDFactors):
            raise RankOutOfRange("k is required when passing a bare Spectrum")
        k = f.k
    _check_rank(int(k), min(spec.n1, spec.n2))
    return float(np.sqrt(spec.tail_energy(int(k)).sum() / spec.n3))


def relative_optimal_error(f: SpectrumLike, k: Optional[int] = None) -> float:
    """optimal_error / ||A||_F; 0 for the zero tensor."""
    total = as_spectrum(f).norm()
    return optimal_error(f, k) / total if total > 0 else 0.0
