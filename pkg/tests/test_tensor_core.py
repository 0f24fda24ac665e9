# tests/test_tensor_core.py
"""
Tensor storage and Fourier transform invariants:
1) Tensor3 is real, finite, third order and read-only
2) ifft_mode3(fft_mode3(A)) == A, and the spectrum of a real tensor is conjugate symmetric
3) Parseval: ||A||_F^2 == (1/n3) * sum_i ||A_hat_i||_F^2
4) the DFT block-diagonalizes the block-circulant matricization
"""
from __future__ import annotations

import numpy as np
import pytest
import scipy.fft

from rtsvd.errors import InvalidTensor, SizeLimit, SymmetryViolation
from rtsvd.tensor import (
    FourierTensor3,
    Tensor3,
    block_circulant,
    fft_mode3,
    fold,
    frobenius_norm,
    ifft_mode3,
    is_self_conjugate,
    map_spectrum,
    matvec,
    mirror_slices,
)


def test_tensor3_rejects_bad_input():
    with pytest.raises(InvalidTensor):
        Tensor3(np.zeros((2, 3)))
    with pytest.raises(InvalidTensor):
        Tensor3(np.zeros((2, 0, 3)))
    with pytest.raises(InvalidTensor):
        Tensor3(np.full((2, 2, 2), np.nan))
    with pytest.raises(InvalidTensor):
        Tensor3(np.zeros((2, 2, 2), dtype=complex))
    # also a ValueError for callers using the standard idiom
    with pytest.raises(ValueError):
        Tensor3(np.full((1, 1, 1), np.inf))


def test_tensor3_is_read_only_and_copies_input():
    raw = np.ones((2, 3, 4))
    t = Tensor3(raw)
    raw[0, 0, 0] = 5.0
    assert t.data[0, 0, 0] == 1.0
    with pytest.raises(ValueError):
        t.data[0, 0, 0] = 2.0
    assert t.data.flags.f_contiguous


def test_accessors(random_tensor3):
    t = random_tensor3(3, 4, 5)
    assert t.dims == (3, 4, 5)
    assert np.array_equal(t.frontal(2), t.data[:, :, 2])
    assert t.lateral(1).dims == (3, 1, 5)
    assert np.array_equal(t.tube(2, 3), t.data[2, 3, :])
    assert (t + t).allclose(2 * t)
    assert (t - t).allclose(Tensor3.zeros(3, 4, 5))
    assert (-t).allclose(t * -1.0)


def test_fft_roundtrip_and_symmetry(random_tensor3):
    for n3 in (1, 2, 5, 8):
        a = random_tensor3(4, 3, n3)
        f = fft_mode3(a)
        assert f.symmetric
        assert np.allclose(f.slices[:, :, 0].imag, 0.0)
        for i in range(1, n3):
            assert np.allclose(f.slices[:, :, n3 - i], np.conj(f.slices[:, :, i]))
        assert ifft_mode3(f).allclose(a, rtol=0, atol=1e-12)


def test_fft_is_unnormalized():
    a = Tensor3(np.ones((1, 1, 4)))
    f = fft_mode3(a)
    assert f.slices[0, 0, 0] == pytest.approx(4.0)
    assert np.allclose(f.slices[0, 0, 1:], 0.0)


def test_parseval(rng):
    for _ in range(100):
        n1, n2, n3 = rng.integers(1, 7, size=3)
        a = Tensor3(rng.standard_normal((n1, n2, n3)))
        lhs = frobenius_norm(a) ** 2
        rhs = frobenius_norm(fft_mode3(a)) ** 2 / n3
        assert rhs == pytest.approx(lhs, rel=1e-10)


def test_ifft_rejects_non_symmetric_spectrum():
    slices = np.zeros((2, 2, 4), dtype=complex)
    slices[:, :, 1] = 1j
    with pytest.raises(SymmetryViolation):
        ifft_mode3(FourierTensor3(slices))
    with pytest.raises(SymmetryViolation):
        FourierTensor3(slices, symmetric=True)
    assert not FourierTensor3.from_slices(slices).symmetric


def test_self_conjugate_indices():
    assert [i for i in range(8) if is_self_conjugate(i, 8)] == [0, 4]
    assert [i for i in range(7) if is_self_conjugate(i, 7)] == [0]


def test_mirror_slices_rebuilds_full_spectrum(random_tensor3):
    for n3 in (4, 5):
        f = fft_mode3(random_tensor3(3, 2, n3)).slices
        half = [f[:, :, i] for i in range(n3 // 2 + 1)]
        assert np.allclose(mirror_slices(half, n3), f)
    with pytest.raises(ValueError):
        mirror_slices([np.zeros((1, 1))], 6)


def test_map_spectrum_symmetry_matches_full_evaluation(random_tensor3):
    a = random_tensor3(3, 3, 6)
    f = fft_mode3(a).slices
    half = map_spectrum(lambda i: f[:, :, i] @ f[:, :, i], 6, exploit_symmetry=True)
    full = map_spectrum(lambda i: f[:, :, i] @ f[:, :, i], 6, exploit_symmetry=False)
    assert len(half) == len(full) == 6
    for x, y in zip(half, full):
        assert np.allclose(x, y)


def test_block_circulant_is_block_diagonalized_by_dft(rng):
    for _ in range(20):
        n1, n2 = (int(x) for x in rng.integers(1, 5, size=2))
        n3 = int(rng.integers(1, 7))
        a = Tensor3(rng.standard_normal((n1, n2, n3)))
        bc = block_circulant(a)
        f_left = np.kron(scipy.fft.fft(np.eye(n3), axis=0), np.eye(n1))
        f_right = np.kron(scipy.fft.ifft(np.eye(n3), axis=0), np.eye(n2))
        d = f_left @ bc @ f_right
        spectrum = fft_mode3(a).slices
        for i in range(n3):
            block = d[i * n1 : (i + 1) * n1, i * n2 : (i + 1) * n2]
            assert np.allclose(block, spectrum[:, :, i], atol=1e-10)
            d[i * n1 : (i + 1) * n1, i * n2 : (i + 1) * n2] = 0.0
        assert np.max(np.abs(d), initial=0.0) <= 1e-10


def test_block_circulant_budget():
    with pytest.raises(SizeLimit):
        block_circulant(Tensor3(np.zeros((4, 4, 4))), budget=100)


def test_matvec_fold_inverse(random_tensor3):
    a = random_tensor3(3, 2, 4)
    m = matvec(a)
    assert m.shape == (12, 2)
    assert np.array_equal(m[3:6], a.frontal(1))
    assert fold(m, a.dims).allclose(a, rtol=0, atol=0)
    with pytest.raises(InvalidTensor):
        fold(m, (2, 2, 4))
