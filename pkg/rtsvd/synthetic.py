# rtsvd/synthetic.py
"""Seeded synthetic tensors and face datasets for demos, benchmarks and tests."""
from __future__ import annotations

from typing import Any, Sequence, Union

import numpy as np
import scipy.linalg

from .algebra import t_qr, to_spatial, tprod, ttranspose
from .errors import RankOutOfRange
from .recognition import FaceDataset
from .tensor import Tensor3, stack_slices


def random_tensor(n1: int, n2: int, n3: int, seed: Any = 0) -> Tensor3:
    return Tensor3(np.random.default_rng(seed).standard_normal((n1, n2, n3)))


def low_rank_tensor(n1: int, n2: int, n3: int, r: int, seed: Any = 0) -> Tensor3:
    """Tubal rank at most r: product of n1 x r x n3 and r x n2 x n3 Gaussian factors."""
    rng = np.random.default_rng(seed)
    left = Tensor3(rng.standard_normal((n1, r, n3)))
    right = Tensor3(rng.standard_normal((r, n2, n3)))
    return tprod(left, right)


def step_spectrum(n3: int, m: int, k: int, tau: float, head: float = 1.0) -> np.ndarray:
    """Every Fourier slice: k values equal to head, the remaining m - k equal to head * tau."""
    if not 1 <= k <= m:
        raise RankOutOfRange(f"k={k} must lie in [1, {m}]")
    row = np.full(m, head * tau)
    row[:k] = head
    return np.tile(row, (n3, 1))


def decaying_spectrum(n3: int, m: int, rate: Union[float, Sequence[float]]) -> np.ndarray:
    """sigma_j = rate_i ** j for j = 0..m-1; rate may vary per slice (mirrored slices must match)."""
    rates = np.broadcast_to(np.asarray(rate, dtype=np.float64), (n3,))
    return rates[:, None] ** np.arange(m)[None, :]


def tensor_with_spectrum(n1: int, n2: int, sigma_hat: np.ndarray, seed: Any = 0) -> Tensor3:
    """
    U * S * V^T with orthogonal U, V from t-QR of Gaussian tensors and an
    f-diagonal S whose Fourier slice i has diagonal sigma_hat[i]. Row i and
    row n3 - i must agree so the result is real.
    """
    sig = np.asarray(sigma_hat, dtype=np.float64)
    n3, r = sig.shape
    if r > min(n1, n2):
        raise RankOutOfRange(f"{r} singular values per slice exceed min(n1, n2)={min(n1, n2)}")
    for i in range(1, n3):
        if not np.array_equal(sig[i], sig[n3 - i]):
            raise ValueError(f"spectrum rows {i} and {n3 - i} must be equal for a real tensor")
    rng = np.random.default_rng(seed)
    u, _ = t_qr(Tensor3(rng.standard_normal((n1, r, n3))))
    v, _ = t_qr(Tensor3(rng.standard_normal((n2, r, n3))))
    s = to_spatial(stack_slices([np.diag(row) for row in sig]))
    return tprod(u, tprod(s, ttranspose(v)))


def separable_faces(
    n_classes: int = 3,
    per_class: int = 10,
    n1: int = 8,
    n3: int = 6,
    *,
    noise: float = 0.01,
    seed: Any = 0,
) -> FaceDataset:
    """
    Images around mutually orthogonal class prototypes: pixel = 0.5 +
    prototype + Gaussian noise, stored class by class with labels
    "person_01", "person_02", ... Pixels stay inside [0, 1] for the default
    noise level.
    """
    d = n1 * n3
    if n_classes > d:
        raise RankOutOfRange(f"{n_classes} orthogonal prototypes need n1 * n3 >= {n_classes}, got {d}")
    rng = np.random.default_rng(seed)
    basis, _ = scipy.linalg.qr(rng.standard_normal((d, n_classes)), mode="economic")
    protos = basis.T.reshape(n_classes, n1, n3)
    protos = protos * (0.4 / np.abs(protos).max())
    images, labels = [], []
    for c in range(n_classes):
        for _ in range(per_class):
            images.append(0.5 + protos[c] + noise * rng.standard_normal((n1, n3)))
            labels.append(f"person_{c + 1:02d}")
    return FaceDataset(Tensor3(np.stack(images, axis=1)), tuple(labels))
