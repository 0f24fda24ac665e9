# tests/test_crossval.py
"""
Cross-validation:
1) the fold partition is a true partition (disjoint, covering, sizes differ by at most one)
2) separable synthetic faces give rate 1.0 for every method, fold and trial
3) same seed, same report; worker count never changes the report
"""
from __future__ import annotations

import numpy as np
import pytest

from rtsvd.crossval import CVReport, cross_validate, fold_partition
from rtsvd.errors import TooFewSamples
from rtsvd.executor import split_budget
from rtsvd.synthetic import separable_faces


def test_fold_partition_is_a_partition():
    parts = fold_partition(23, 5, seed=3)
    assert len(parts) == 5
    assert sorted(len(p) for p in parts) == [4, 4, 5, 5, 5]
    assert [len(p) for p in parts[:3]] == [5, 5, 5]
    allidx = np.concatenate(parts)
    assert sorted(allidx.tolist()) == list(range(23))
    for p in parts:
        assert np.all(np.diff(p) > 0)
    again = fold_partition(23, 5, seed=3)
    assert all(np.array_equal(x, y) for x, y in zip(parts, again))


def test_fold_partition_errors():
    with pytest.raises(TooFewSamples):
        fold_partition(3, 5)
    with pytest.raises(ValueError):
        fold_partition(10, 1)


def test_split_budget():
    assert split_budget(1, 10) == (1, 1)
    assert split_budget(8, 10) == (8, 1)
    assert split_budget(8, 2) == (2, 4)
    with pytest.raises(ValueError):
        split_budget(0, 3)


def test_separable_faces_are_recognized_perfectly():
    data = separable_faces(n_classes=3, per_class=10, seed=2)
    report = cross_validate(data, k=3, folds=10, trials=20, seed=0, p=2, q=1)
    assert report.methods == ("tsvd", "rtsvd", "rtsvd-q")
    assert len(report.results) == 30
    for r in report.results:
        expected_trials = 1 if r.method == "tsvd" else 20
        assert len(r.rates) == expected_trials
        assert r.min == r.mean == r.max == 1.0
        assert r.n_train + r.n_test == 30


def test_deterministic_method_has_one_rate_per_fold():
    data = separable_faces(n_classes=3, per_class=4, seed=0)
    report = cross_validate(data, k=2, methods=("tsvd",), folds=3, trials=5)
    for r in report.for_method("tsvd"):
        assert len(r.rates) == 1
        assert r.min == r.mean == r.max


def test_same_seed_same_report_and_workers_do_not_matter():
    data = separable_faces(n_classes=3, per_class=6, noise=0.2, seed=4)
    kwargs = dict(k=2, methods=("tsvd", "rtsvd"), folds=3, trials=3, seed=9, p=2)
    r1 = cross_validate(data, **kwargs)
    r2 = cross_validate(data, **kwargs)
    r4 = cross_validate(data, workers=4, **kwargs)
    assert isinstance(r1, CVReport)
    assert r1.to_dict() == r2.to_dict() == r4.to_dict()
    rates = [x for r in r1.results for x in r.rates]
    assert all(0.0 <= x <= 1.0 for x in rates)


def test_timing_is_kept_out_of_the_report():
    data = separable_faces(n_classes=2, per_class=3, seed=0)
    report = cross_validate(data, k=1, methods=("tsvd",), folds=2, trials=1)
    assert "seconds" not in str(report.to_dict())
    timing = report.timing_dict()
    assert len(timing["timing"]) == 2
    assert all(t["seconds"][0] >= 0 for t in timing["timing"])
