# tests/test_bounds.py
"""
Error-bound diagnostics:
1) closed forms: q = 0 expected bound == sqrt(1 + k/(p-1)) * optimal error
2) the tail constant in both variants at n2=100, k=30, p=20, delta=1e-16
3) the deterministic structural bound holds on every instance
4) Monte-Carlo: mean squared projection error stays under the expected bound
   (slack 1 + 3/sqrt(N)); tail-bound exceedances stay near delta
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from rtsvd.bounds import (
    bound_expected,
    bound_expected_uniform,
    bound_gradual_decay,
    bound_rapid_decay,
    build_error_report,
    c_delta,
    flop_estimate,
    gu_constant,
    gu_subspace_bound,
    matrix_expected_bound,
    structural_error_bound,
    subspace_bound_simplified,
    tail_bound,
)
from rtsvd.errors import (
    InvalidDelta,
    IterationVectorLength,
    OversamplingTooSmall,
    RankDeficientSketch,
)
from rtsvd.linalg import range_finder
from rtsvd.randomized import rtsvd, rtsvd_subspace
from rtsvd.sketch import SketchConfig
from rtsvd.synthetic import step_spectrum, tensor_with_spectrum
from rtsvd.tensor import Tensor3
from rtsvd.tsvd import Spectrum, optimal_error, singular_spectrum, tsvd_truncated


def replace_seed(cfg: SketchConfig, seed: int) -> SketchConfig:
    return SketchConfig(k=cfg.k, p=cfg.p, q=cfg.q, seed=seed)


def _spectrum() -> Spectrum:
    sig = np.array(
        [
            [3.0, 2.0, 1.0, 0.5],
            [2.0, 1.0, 0.5, 0.25],
            [2.0, 1.0, 0.5, 0.25],
        ]
    )
    return Spectrum(sig, n1=4, n2=5)


def test_expected_bound_q0_closed_form():
    spec = _spectrum()
    cfg = SketchConfig(k=2, p=5)
    assert bound_expected(spec, cfg) == pytest.approx(math.sqrt(1 + 2 / 4) * optimal_error(spec, 2))
    assert bound_expected_uniform(spec, cfg) == pytest.approx(bound_expected(spec, cfg))


def test_expected_bound_decreases_with_q():
    spec = _spectrum()
    values = [bound_expected(spec, SketchConfig(k=2, p=5, q=q)) for q in range(4)]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert values[-1] >= optimal_error(spec, 2)


def test_uniform_bound_dominates_per_slice_bound():
    spec = _spectrum()
    cfg = SketchConfig(k=1, p=4, q=1)
    assert bound_expected_uniform(spec, cfg) >= bound_expected(spec, cfg) - 1e-12


def test_rapid_and_gradual_decay_forms():
    spec = _spectrum()
    cfg = SketchConfig(k=2, p=5)
    assert bound_rapid_decay(spec, cfg) == pytest.approx(math.sqrt(1.5) * 1.0)
    # tail_i <= (m - k) sigma_(k+1)^2 makes the gradual form an upper bound of the q = 0 bound
    assert bound_gradual_decay(spec, cfg) >= bound_expected(spec, cfg) - 1e-12
    assert bound_rapid_decay(spec, SketchConfig(k=4, p=5)) == 0.0


def test_oversampling_and_delta_validation():
    spec = _spectrum()
    with pytest.raises(OversamplingTooSmall):
        bound_expected(spec, SketchConfig(k=2, p=1))
    with pytest.raises(InvalidDelta):
        c_delta(100, 30, 20, 0.0)
    with pytest.raises(InvalidDelta):
        tail_bound(spec, SketchConfig(k=2, p=5), 1.0)


def test_c_delta_reference_values():
    base10 = c_delta(100, 30, 20, 1e-16, variant="base10")
    assert 40.0 <= base10 <= 46.0
    natural = c_delta(100, 30, 20, 1e-16)
    assert natural == pytest.approx(131.8, rel=0.01)
    assert natural > base10
    with pytest.raises(ValueError):
        c_delta(100, 30, 20, 0.1, variant="other")


def test_tail_bound_dominates_expected_bound():
    spec = _spectrum()
    cfg = SketchConfig(k=2, p=5, q=1)
    tb, cd = tail_bound(spec, cfg, 0.05)
    assert cd > 1.0
    assert tb >= bound_expected(spec, cfg)


def test_tail_bound_variant_selects_constant():
    spec = _spectrum()
    cfg = SketchConfig(k=2, p=5, q=1)
    _, natural = tail_bound(spec, cfg, 0.05)
    tb10, base10 = tail_bound(spec, cfg, 0.05, variant="base10")
    assert natural == pytest.approx(c_delta(5, 2, 5, 0.05))
    assert base10 == pytest.approx(c_delta(5, 2, 5, 0.05, variant="base10"))
    assert tb10 <= tail_bound(spec, cfg, 0.05)[0]


@pytest.mark.parametrize("variant", ["natural", "base10"])
@pytest.mark.parametrize("delta", [0.5, 0.01])
def test_c_delta_decreases_with_oversampling(variant, delta):
    values = [c_delta(100, 10, p, delta, variant=variant) for p in range(80)]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_subspace_bound_sharper_than_competing_bound_across_parameters():
    violations = []
    for n in (30, 60):
        sigma = 0.8 ** np.arange(n)
        for k in (2, 5, 10):
            for p in (2, 5, 10):
                for q in (0, 1, 2):
                    expected = matrix_expected_bound(sigma, k, p, q)
                    simple = subspace_bound_simplified(sigma, k, p, q, n=n)
                    gu = gu_subspace_bound(sigma, k, p, q, n=n)
                    if not expected <= simple * (1 + 1e-12) <= gu * (1 + 1e-12):
                        violations.append((n, k, p, q))
                    if q == 0 and not simple < gu:
                        violations.append((n, k, p, q))
    assert violations == []


def test_matrix_forms():
    sigma = np.array([5.0, 4.0, 2.0, 1.0, 0.5])
    # k/(p-1) = 1, tail energy 4 + 1 + 0.25
    assert matrix_expected_bound(sigma, 2, 3, q=0) == pytest.approx(math.sqrt(2 * 5.25))
    assert matrix_expected_bound(sigma, 2, 3, q=2) == pytest.approx(
        math.sqrt((1 + 2 / 2 * 0.5**8) * 5.25)
    )
    simple = subspace_bound_simplified(sigma, 2, 3, 1, n=5)
    gu = gu_subspace_bound(sigma, 2, 3, 1, n=5)
    # the competing constant is far larger than 1/(p-1)
    assert gu_constant(5, 2, 3) ** 2 > 1 / 2
    assert gu > simple
    assert simple >= math.sqrt(5.25)


def test_structural_bound_holds_on_500_instances(rng):
    violations = 0
    for trial in range(500):
        a = rng.standard_normal((20, 15))
        w = rng.standard_normal((15, 7))
        k = int(rng.integers(1, 8))
        q = trial % 3
        qmat = range_finder(a, w, q)
        lhs = float(np.linalg.norm(a - qmat @ (qmat.T @ a)) ** 2)
        rhs = structural_error_bound(a, w, k, q)
        if lhs > rhs * (1 + 1e-10) + 1e-10:
            violations += 1
    assert violations == 0


def test_structural_bound_rejects_deficient_sketch(rng):
    a = rng.standard_normal((10, 8))
    w = np.zeros((8, 4))
    with pytest.raises(RankDeficientSketch):
        structural_error_bound(a, w, 2, 0)


def test_flop_estimate_orders_methods():
    dims = (192, 512, 64)
    assert flop_estimate(dims, 25, 10, 0, method="rtsvd") < flop_estimate(dims, 25, method="tsvd")
    assert flop_estimate(dims, 25, 10, 2) > flop_estimate(dims, 25, 10, 0)


def test_flop_estimate_rejects_q_vector_of_wrong_length():
    with pytest.raises(IterationVectorLength):
        flop_estimate((6, 5, 4), 2, 2, (0, 1))
    with pytest.raises(IterationVectorLength):
        flop_estimate((6, 5, 4), 2, 2, (0, 1, 2, 3))
    assert flop_estimate((6, 5, 4), 2, 2, (0, 1, 2, 1)) > flop_estimate((6, 5, 4), 2, 2, 0)


def test_report_fields(random_tensor3):
    a = random_tensor3(10, 9, 4)
    f, report = rtsvd(a, SketchConfig(k=3, p=3, seed=0), delta=0.1)
    d = report.to_dict()
    assert d["q"] == [0, 0, 0, 0]
    assert len(d["tau"]) == 4
    assert report.delta == 0.1
    assert report.expected_bound_relative == pytest.approx(report.expected_bound / report.norm)
    assert report.optimal <= report.realized


def test_report_without_expected_bound_for_small_p():
    spec = _spectrum()
    report = build_error_report(
        spec, SketchConfig(k=2, p=1), realized_sq=np.zeros(3), projection_sq=np.zeros(3), delta=0.05
    )
    assert report.expected_bound is None
    assert report.tail_bound is not None


@pytest.mark.slow
def test_expected_bound_monte_carlo(rng):
    a = Tensor3(rng.standard_normal((60, 50, 8)))
    spec = singular_spectrum(a)
    k, p, n = 10, 8, 100
    e_k = optimal_error(spec, k)
    sq = []
    for seed in range(n):
        _, report = rtsvd(a, SketchConfig(k=k, p=p, seed=seed), spectrum=spec)
        sq.append((report.projection * report.norm) ** 2)
    assert np.mean(sq) <= (1 + k / (p - 1)) * e_k**2 * (1 + 3 / math.sqrt(n))


@pytest.mark.slow
def test_subspace_bound_monte_carlo_and_monotone_error():
    sig = step_spectrum(8, 40, 10, tau=0.9)
    a = tensor_with_spectrum(60, 50, sig, seed=1)
    spec = singular_spectrum(a)
    n = 100
    means, errs = [], []
    for q in range(4):
        cfg = SketchConfig(k=10, p=5, q=q)
        bound = bound_expected(spec, replace_seed(cfg, 0))
        sq, rel = [], []
        for seed in range(n):
            _, report = rtsvd_subspace(a, replace_seed(cfg, seed), spectrum=spec)
            sq.append((report.projection * report.norm) ** 2)
            rel.append(report.projection)
        assert np.mean(sq) <= bound**2 * (1 + 3 / math.sqrt(n))
        means.append(float(np.mean(rel)))
        errs.append(float(np.std(rel, ddof=1) / math.sqrt(n)))
    for i in range(3):
        assert means[i + 1] <= means[i] + 2 * (errs[i] + errs[i + 1])


@pytest.mark.slow
def test_tail_bound_exceedance_frequency(rng):
    a = Tensor3(rng.standard_normal((30, 25, 4)))
    spec = singular_spectrum(a)
    delta, n = 0.05, 1000
    cfg = SketchConfig(k=5, p=4)
    bound, _ = tail_bound(spec, cfg, delta)
    exceed = 0
    for seed in range(n):
        _, report = rtsvd(a, SketchConfig(k=5, p=4, seed=seed), spectrum=spec, delta=delta)
        if report.projection * report.norm > bound:
            exceed += 1
    assert exceed / n <= delta + 3 * math.sqrt(delta / n)


def test_tsvd_factors_feed_the_bounds(random_tensor3):
    a = random_tensor3(8, 7, 3)
    f = tsvd_truncated(a, 2)
    cfg = SketchConfig(k=2, p=3)
    assert bound_expected(f, cfg) == pytest.approx(bound_expected(singular_spectrum(a), cfg), rel=1e-10)
