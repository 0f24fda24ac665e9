# rtsvd/algebra.py
"""
The t-product and its companions.

tprod works slice-wise in the Fourier domain; tprod_naive evaluates the
circular-convolution definition directly and serves as the oracle.
"""
from __future__ import annotations

from typing import Any, Optional, Tuple

import numpy as np

from .config import DEFAULT_CONFIG
from .errors import DimensionMismatch, SizeLimit
from .linalg import as_slice, qr_econ
from .tensor import (
    FourierTensor3,
    Tensor3,
    fft_mode3,
    frobenius_norm,
    ifft_mode3,
    is_self_conjugate,
    map_spectrum,
    stack_slices,
)


def _check_product_dims(a: Tensor3, b: Tensor3) -> None:
    if a.n2 != b.n1 or a.n3 != b.n3:
        raise DimensionMismatch(f"cannot t-multiply {a.dims} by {b.dims}: need a.n2 == b.n1 and equal n3")


def to_spatial(slices: np.ndarray) -> Tensor3:
    """Inverse transform of raw Fourier slices produced by a slice-wise kernel."""
    return ifft_mode3(FourierTensor3.from_slices(slices))


def tprod(
    a: Tensor3,
    b: Tensor3,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> Tensor3:
    _check_product_dims(a, b)
    n3 = a.n3
    fa = fft_mode3(a).slices
    fb = fft_mode3(b).slices

    def _slice(i: int) -> np.ndarray:
        real = is_self_conjugate(i, n3)
        return as_slice(fa[:, :, i], real) @ as_slice(fb[:, :, i], real)

    out = map_spectrum(_slice, n3, executor=executor, exploit_symmetry=exploit_symmetry)
    return to_spatial(stack_slices(out))


def tprod_naive(a: Tensor3, b: Tensor3, *, budget: Optional[int] = None) -> Tensor3:
    """C[:, :, m] = sum_t A[:, :, t] @ B[:, :, (m - t) mod n3]; no transforms."""
    _check_product_dims(a, b)
    n1, n2, n3 = a.dims
    n4 = b.n2
    budget = int(DEFAULT_CONFIG["dense_budget"] if budget is None else budget)
    work = n1 * n2 * n4 * n3 * n3
    if work > budget:
        raise SizeLimit(f"tprod_naive needs {work} multiply-adds, budget is {budget}")
    out = np.zeros((n1, n4, n3))
    for m in range(n3):
        for t in range(n3):
            out[:, :, m] += a.data[:, :, t] @ b.data[:, :, (m - t) % n3]
    return Tensor3(out)


def ttranspose(a: Tensor3) -> Tensor3:
    """Transpose every frontal slice and reverse the order of slices 2..n3."""
    n3 = a.n3
    order = [0] + list(range(n3 - 1, 0, -1))
    return Tensor3(np.transpose(a.data[:, :, order], (1, 0, 2)))


def identity_tensor(n: int, n3: int) -> Tensor3:
    data = np.zeros((n, n, n3))
    data[:, :, 0] = np.eye(n)
    return Tensor3(data)


def t_qr(
    a: Tensor3,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> Tuple[Tensor3, Tensor3]:
    """Economy QR of every Fourier slice; R diagonals real and nonnegative."""
    n3 = a.n3
    fa = fft_mode3(a).slices

    def _slice(i: int) -> Tuple[np.ndarray, np.ndarray]:
        return qr_econ(as_slice(fa[:, :, i], is_self_conjugate(i, n3)))

    out = map_spectrum(_slice, n3, executor=executor, exploit_symmetry=exploit_symmetry)
    q = to_spatial(stack_slices([qs for qs, _ in out]))
    r = to_spatial(stack_slices([rs for _, rs in out]))
    return q, r


def is_orthogonal(a: Tensor3, tol: Optional[float] = None) -> bool:
    """a^T * a equals the identity tensor within tol * sqrt(n2 * n3)."""
    tol = float(DEFAULT_CONFIG["tol"] if tol is None else tol)
    n2, n3 = a.n2, a.n3
    gram = tprod(ttranspose(a), a)
    return frobenius_norm(gram - identity_tensor(n2, n3)) <= tol * np.sqrt(n2 * n3)


def is_f_diagonal(a: Tensor3, tol: Optional[float] = None) -> bool:
    tol = float(DEFAULT_CONFIG["tol"] if tol is None else tol)
    n1, n2, _ = a.dims
    mask = ~np.eye(n1, n2, dtype=bool)
    off = np.abs(a.data[mask, :]) if mask.any() else np.zeros(0)
    return float(off.max(initial=0.0)) <= tol * frobenius_norm(a)
