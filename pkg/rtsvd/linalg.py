# rtsvd/linalg.py
"""
Per-slice matrix kernels shared by the t-product algebra, the exact t-SVD
and the randomized variants.

Sign/phase conventions make factors reproducible:
- QR: diagonal of R real and nonnegative.
- SVD: first nonzero entry of every left singular vector real and nonnegative.
"""
from __future__ import annotations

import logging
from typing import Tuple

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)

_PHASE_FLOOR = 1e-14


def as_slice(mat: np.ndarray, real: bool) -> np.ndarray:
    """Self-conjugate Fourier slices are real; drop the zero imaginary part."""
    return np.ascontiguousarray(mat.real if real else mat)


def qr_econ(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    q, r = scipy.linalg.qr(a, mode="economic")
    d = np.diagonal(r).copy()
    mag = np.abs(d)
    phase = np.ones_like(d)
    nz = mag > 0
    phase[nz] = d[nz] / mag[nz]
    q = q * phase[None, :]
    r = r * np.conj(phase)[:, None]
    return q, r


def svd_econ(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Economy SVD a = u @ diag(s) @ v^H with the phase convention applied; returns (u, s, v)."""
    try:
        u, s, vh = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        logger.warning("gesdd did not converge on a %s slice; retrying with gesvd", a.shape)
        u, s, vh = scipy.linalg.svd(a, full_matrices=False, lapack_driver="gesvd")
    u, v = _fix_svd_phase(u, np.conj(vh.T))
    return u, s, v


def _fix_svd_phase(u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    u = u.copy()
    v = v.copy()
    for j in range(u.shape[1]):
        col = u[:, j]
        mag = np.abs(col)
        peak = mag.max(initial=0.0)
        if peak == 0.0:
            continue
        first = int(np.argmax(mag > _PHASE_FLOOR * peak))
        phase = col[first] / mag[first]
        u[:, j] *= np.conj(phase)
        v[:, j] *= np.conj(phase)
    return u, v


def range_finder(a: np.ndarray, omega: np.ndarray, q: int) -> np.ndarray:
    """
    Orthonormal basis for range(a @ omega) refined by q rounds of subspace
    iteration, re-orthogonalizing after every multiplication. q = 0 is the
    plain randomized range finder.
    """
    qmat, _ = qr_econ(a @ omega)
    if q == 0:
        return qmat
    ah = np.conj(a.T)
    for _ in range(q):
        z, _ = qr_econ(ah @ qmat)
        qmat, _ = qr_econ(a @ z)
    return qmat


def project_svd(a: np.ndarray, qmat: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    SVD of the projected block B = Q^H a, truncated to k columns before
    lifting: returns (Q @ Ub[:, :k], all singular values of B, Vb[:, :k]).
    """
    b = np.conj(qmat.T) @ a
    ub, s, vb = svd_econ(b)
    return qmat @ ub[:, :k], s, vb[:, :k]
