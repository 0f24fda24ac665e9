# rtsvd/tensor.py
"""
Dense third-order tensors and their tube-wise Fourier transforms.

Storage layout: a Tensor3 holds an (n1, n2, n3) float64 array in Fortran
order, so entry (i, j, k) sits at offset i + n1*j + n1*n2*k and the
frontal-slice index varies slowest. The tensor file format writes exactly
this byte sequence.

DFT convention: unnormalized forward transform along mode 3,
1/n3-normalized inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.fft

from .config import DEFAULT_CONFIG
from .errors import InvalidTensor, SizeLimit, SymmetryViolation

Dims = Tuple[int, int, int]

SYMMETRY_RTOL = 1e-12
IMAG_RESIDUE_RTOL = 1e-8


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Tensor3:
    """Real dense n1 x n2 x n3 tensor; immutable after construction."""

    data: np.ndarray

    def __post_init__(self) -> None:
        raw = np.asarray(self.data)
        if np.iscomplexobj(raw):
            raise InvalidTensor("Tensor3 holds real scalars; got a complex array")
        if raw.ndim != 3:
            raise InvalidTensor(f"Tensor3 needs a 3-d array, got ndim={raw.ndim}")
        if min(raw.shape) < 1:
            raise InvalidTensor(f"all dimensions must be >= 1, got {raw.shape}")
        arr = np.array(raw, dtype=np.float64, order="F", copy=True)
        if not np.all(np.isfinite(arr)):
            raise InvalidTensor("Tensor3 entries must be finite (no NaN/Inf)")
        object.__setattr__(self, "data", _freeze(arr))

    @classmethod
    def zeros(cls, n1: int, n2: int, n3: int) -> "Tensor3":
        return cls(np.zeros((n1, n2, n3)))

    @classmethod
    def from_frontal_slices(cls, slices: Sequence[np.ndarray]) -> "Tensor3":
        return cls(np.stack([np.asarray(s, dtype=np.float64) for s in slices], axis=2))

    @property
    def dims(self) -> Dims:
        n1, n2, n3 = self.data.shape
        return int(n1), int(n2), int(n3)

    @property
    def n1(self) -> int:
        return self.dims[0]

    @property
    def n2(self) -> int:
        return self.dims[1]

    @property
    def n3(self) -> int:
        return self.dims[2]

    def frontal(self, k: int) -> np.ndarray:
        return self.data[:, :, k]

    def lateral(self, j: int) -> "Tensor3":
        return Tensor3(self.data[:, j : j + 1, :])

    def laterals(self, idx: Sequence[int]) -> "Tensor3":
        return Tensor3(self.data[:, list(idx), :])

    def tube(self, i: int, j: int) -> np.ndarray:
        return self.data[i, j, :]

    def __add__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(self.data + _as_array(other))

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(self.data - _as_array(other))

    def __mul__(self, scalar: float) -> "Tensor3":
        return Tensor3(self.data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor3":
        return Tensor3(-self.data)

    def allclose(self, other: "Tensor3", *, rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        return self.dims == other.dims and bool(np.allclose(self.data, other.data, rtol=rtol, atol=atol))

    def __repr__(self) -> str:
        return f"Tensor3(dims={self.dims})"


def _as_array(x: Union[Tensor3, np.ndarray]) -> np.ndarray:
    return x.data if isinstance(x, Tensor3) else np.asarray(x)


def conjugate_symmetry_residual(slices: np.ndarray) -> float:
    """max |slice(n3-i) - conj(slice(i))| over i = 1..n3-1 (0-based), plus |imag slice 0|."""
    n3 = slices.shape[2]
    res = float(np.max(np.abs(slices[:, :, 0].imag), initial=0.0))
    if n3 > 1:
        mirrored = np.conj(slices[:, :, :0:-1])
        res = max(res, float(np.max(np.abs(slices[:, :, 1:] - mirrored), initial=0.0)))
    return res


@dataclass(frozen=True, eq=False)
class FourierTensor3:
    """Frontal slices of a tensor after the length-n3 DFT along tubes."""

    slices: np.ndarray
    symmetric: bool = False

    def __post_init__(self) -> None:
        raw = np.asarray(self.slices)
        if raw.ndim != 3 or min(raw.shape) < 1:
            raise InvalidTensor(f"FourierTensor3 needs a non-empty 3-d array, got shape {raw.shape}")
        arr = np.array(raw, dtype=np.complex128, order="F", copy=True)
        if not np.all(np.isfinite(arr)):
            raise InvalidTensor("FourierTensor3 entries must be finite")
        if self.symmetric:
            scale = max(float(np.max(np.abs(arr), initial=0.0)), np.finfo(float).tiny)
            residual = conjugate_symmetry_residual(arr)
            if residual > SYMMETRY_RTOL * scale:
                raise SymmetryViolation(
                    f"spectrum flagged symmetric but conjugate-symmetry residual is {residual:.3e}"
                )
        object.__setattr__(self, "slices", _freeze(arr))

    @classmethod
    def from_slices(cls, slices: np.ndarray) -> "FourierTensor3":
        """Build from raw slices and set the flag only when the relation holds."""
        arr = np.asarray(slices, dtype=np.complex128)
        scale = max(float(np.max(np.abs(arr), initial=0.0)), np.finfo(float).tiny)
        return cls(arr, symmetric=conjugate_symmetry_residual(arr) <= SYMMETRY_RTOL * scale)

    @property
    def dims(self) -> Dims:
        n1, n2, n3 = self.slices.shape
        return int(n1), int(n2), int(n3)

    @property
    def n3(self) -> int:
        return self.dims[2]

    def slice(self, i: int) -> np.ndarray:
        return self.slices[:, :, i]

    def __repr__(self) -> str:
        return f"FourierTensor3(dims={self.dims}, symmetric={self.symmetric})"


def fft_mode3(t: Tensor3) -> FourierTensor3:
    """Unnormalized forward DFT of every tube fiber."""
    return FourierTensor3(scipy.fft.fft(t.data, axis=2), symmetric=True)


def ifft_mode3(f: FourierTensor3) -> Tensor3:
    """1/n3-normalized inverse DFT; the result must be real up to rounding."""
    spatial = scipy.fft.ifft(f.slices, axis=2)
    residue = float(np.max(np.abs(spatial.imag), initial=0.0))
    if residue > IMAG_RESIDUE_RTOL * frobenius_norm(f):
        raise SymmetryViolation(
            f"inverse transform imaginary residue {residue:.3e} exceeds "
            f"{IMAG_RESIDUE_RTOL:g} * ||f||; spectrum is not conjugate symmetric"
        )
    return Tensor3(spatial.real)


def frobenius_norm(t: Union[Tensor3, FourierTensor3]) -> float:
    arr = t.data if isinstance(t, Tensor3) else t.slices
    return float(np.linalg.norm(arr.ravel()))


def is_self_conjugate(i: int, n3: int) -> bool:
    """Slice i (0-based) maps to itself under i -> n3 - i: the DC slice and, for even n3, the Nyquist slice."""
    return i == 0 or (n3 % 2 == 0 and i == n3 // 2)


def half_indices(n3: int) -> range:
    return range(n3 // 2 + 1)


def mirror_slices(half: Sequence[np.ndarray], n3: int) -> np.ndarray:
    """Full conjugate-symmetric spectrum from slices 0..n3//2."""
    if len(half) != n3 // 2 + 1:
        raise ValueError(f"expected {n3 // 2 + 1} half-spectrum slices, got {len(half)}")
    first = np.asarray(half[0])
    out = np.empty(first.shape + (n3,), dtype=np.complex128, order="F")
    for i, s in enumerate(half):
        out[:, :, i] = s
    for i in range(n3 // 2 + 1, n3):
        out[:, :, i] = np.conj(out[:, :, n3 - i])
    return out


def _conj_result(r: Any) -> Any:
    if isinstance(r, np.ndarray):
        return np.conj(r) if np.iscomplexobj(r) else r
    if isinstance(r, tuple):
        return tuple(_conj_result(x) for x in r)
    if isinstance(r, list):
        return [_conj_result(x) for x in r]
    return r


def map_spectrum(
    fn: Callable[[int], Any],
    n3: int,
    *,
    executor: Optional[Any] = None,
    exploit_symmetry: Optional[bool] = None,
) -> List[Any]:
    """
    Run fn(i) for every Fourier slice index and return results in index order.

    With conjugate-symmetry exploitation only slices 0..n3//2 are computed;
    slice n3-i reuses the conjugate of slice i's result (complex arrays
    conjugated, real arrays and scalars passed through).
    """
    if exploit_symmetry is None:
        exploit_symmetry = bool(DEFAULT_CONFIG["exploit_symmetry"])
    indices = list(half_indices(n3)) if exploit_symmetry else list(range(n3))
    results = executor.map(fn, indices) if executor is not None else [fn(i) for i in indices]
    if not exploit_symmetry:
        return results
    full = list(results) + [None] * (n3 - len(results))
    for i in range(n3 // 2 + 1, n3):
        full[i] = _conj_result(full[n3 - i])
    return full


def stack_slices(mats: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack([np.asarray(m, dtype=np.complex128) for m in mats], axis=2)


def block_circulant(t: Tensor3, *, budget: Optional[int] = None) -> np.ndarray:
    """
    Block-circulant matricization with first block column (A1; A2; ...; An3):
    block (r, c) = A^((r - c) mod n3). Oracle only; capped by the dense budget.
    """
    n1, n2, n3 = t.dims
    budget = int(DEFAULT_CONFIG["dense_budget"] if budget is None else budget)
    size = n1 * n3 * n2 * n3
    if size > budget:
        raise SizeLimit(f"block_circulant needs {size} entries, budget is {budget}")
    out = np.empty((n1 * n3, n2 * n3))
    for r in range(n3):
        for c in range(n3):
            out[r * n1 : (r + 1) * n1, c * n2 : (c + 1) * n2] = t.data[:, :, (r - c) % n3]
    return out


def matvec(t: Tensor3) -> np.ndarray:
    """Stack the frontal slices vertically (the first block column of the circulant)."""
    return np.vstack([t.frontal(k) for k in range(t.n3)])


def fold(mat: np.ndarray, dims: Dims) -> Tensor3:
    """Inverse of matvec."""
    n1, n2, n3 = dims
    mat = np.asarray(mat, dtype=np.float64)
    if mat.shape != (n1 * n3, n2):
        raise InvalidTensor(f"cannot fold a {mat.shape} matrix into dims {dims}")
    return Tensor3.from_frontal_slices([mat[k * n1 : (k + 1) * n1] for k in range(n3)])
