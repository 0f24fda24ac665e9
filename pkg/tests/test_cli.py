# tests/test_cli.py
"""
End-to-end CLI runs (python -m rtsvd ...), in-process through main():
1) synth -> info -> decompose writes U/S/V TensorFiles and a report
2) worker count never changes the factor files
3) bench-error and recognize/cross-validate write their tables
4) library errors map to exit code 2 and a run.shutdown with exit_reason "error"
5) flag > config file > RTSVD_WORKERS > default
"""
from __future__ import annotations

import csv
import json
import os
import time
from pathlib import Path

import pytest

from rtsvd.cli import EXIT_ERROR, EXIT_OK, build_parser, build_run_config, main
from rtsvd.reports import BENCH_COLUMNS
from rtsvd.tensor_file import load_tensor, read_header

WORKER_COUNTS = (1, 2, 4, 8)


def _synth(tmp_path: Path, *extra: str, name: str = "a.tt3") -> Path:
    out = tmp_path / name
    assert main(["synth", "--out", str(out), "--log-level", "WARNING", *extra]) == EXIT_OK
    return out


def _ledger(runtime_dir: Path) -> list:
    path = runtime_dir / "events.jsonl"
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def test_synth_info_decompose_tsvd(tmp_path, capsys):
    src = _synth(tmp_path, "--kind", "low-rank", "--dims", "12,10,5", "--rank", "3")
    assert read_header(src).dims == (12, 10, 5)

    info_out = tmp_path / "info.json"
    assert main(["info", "--input", str(src), "--k", "3", "--p", "1", "--out", str(info_out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "dims: [12, 10, 5]" in printed
    info = json.loads(info_out.read_text(encoding="utf-8"))
    assert info["relative_optimal_error"] == pytest.approx(0.0, abs=1e-10)
    assert info["flops_rtsvd"] < info["flops_tsvd"]

    out = tmp_path / "dec"
    assert main(["decompose", "--input", str(src), "--method", "tsvd", "--k", "3", "--out", str(out)]) == EXIT_OK
    assert load_tensor(out / "U.tt3").dims == (12, 3, 5)
    assert load_tensor(out / "S.tt3").dims == (3, 3, 5)
    assert load_tensor(out / "V.tt3").dims == (10, 3, 5)
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report["realized"] == pytest.approx(0.0, abs=1e-10)
    assert "wall_time" not in report
    assert json.loads((out / "report_timing.json").read_text(encoding="utf-8"))["wall_time"] >= 0


def test_randomized_factors_do_not_depend_on_workers(tmp_path):
    src = _synth(tmp_path, "--kind", "decay", "--dims", "16,14,6", "--rate", "0.7")
    common = ["decompose", "--input", str(src), "--method", "rtsvd-q", "--k", "4", "--p", "3", "--q", "1", "--seed", "11"]
    for workers in WORKER_COUNTS:
        assert main([*common, "--workers", str(workers), "--out", str(tmp_path / f"w{workers}")]) == EXIT_OK
    for name in ("U.tt3", "S.tt3", "V.tt3"):
        reference = (tmp_path / "w1" / name).read_bytes()
        for workers in WORKER_COUNTS[1:]:
            assert (tmp_path / f"w{workers}" / name).read_bytes() == reference, (name, workers)
    report = json.loads((tmp_path / "w1" / "report.json").read_text(encoding="utf-8"))
    assert report["q"] == [1] * 6
    assert report["projection"] <= report["realized"] + 1e-12
    assert report["optimal"] <= report["realized"] + 1e-12


def test_bench_error_table(tmp_path):
    src = _synth(tmp_path, "--kind", "random", "--dims", "10,8,4")
    out = tmp_path / "bench.csv"
    argv = ["bench-error", "--input", str(src), "--k", "2,8", "--q", "0,1", "--p", "2", "--trials", "3", "--out", str(out)]
    assert main(argv) == EXIT_OK
    with out.open(encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == BENCH_COLUMNS
    body = [dict(zip(rows[0], r)) for r in rows[1:]]
    assert [(r["k"], r["q"]) for r in body] == [("2", "0"), ("2", "1"), ("8", "0"), ("8", "1")]
    for r in body:
        assert float(r["e_k"]) <= float(r["mean"])
        assert float(r["min"]) <= float(r["mean"]) <= float(r["max"])
    full = [r for r in body if r["k"] == "8"]
    assert all(r["e_k"] == "0" for r in full)


def test_faces_recognize_and_cross_validate(tmp_path):
    faces = tmp_path / "faces"
    assert main(["synth", "--kind", "faces", "--dims", "8,6,1", "--classes", "3", "--per-class", "10", "--out", str(faces)]) == EXIT_OK
    assert len(list(faces.rglob("*.pgm"))) == 30

    common = ["--input", str(faces), "--k", "3", "--p", "2", "--q", "1", "--folds", "5", "--trials", "2"]
    rec = tmp_path / "rec"
    assert main(["recognize", *common, "--out", str(rec)]) == EXIT_OK
    with (rec / "recognition_rates.csv").open(encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["method", "stat", "fold_1", "fold_2", "fold_3", "fold_4", "fold_5"]
    assert len(rows) == 1 + 3 * 3
    assert all(cell == "1" for r in rows[1:] for cell in r[2:])
    assert (rec / "cv_report_timing.json").exists()

    cv_out = tmp_path / "cv.json"
    argv = ["cross-validate", *common, "--method", "tsvd,rtsvd", "--format", "json", "--out", str(cv_out)]
    assert main(argv) == EXIT_OK
    report = json.loads(cv_out.read_text(encoding="utf-8"))
    assert report["methods"] == ["tsvd", "rtsvd"]
    assert all(r["min"] == 1.0 for r in report["results"])
    assert (tmp_path / "cv_timing.json").exists()


def test_library_error_exits_2_and_records_shutdown(tmp_path, runtime_dir, capsys):
    src = _synth(tmp_path, "--dims", "6,5,3")
    code = main(["decompose", "--input", str(src), "--method", "tsvd", "--k", "9", "--out", str(tmp_path / "x")])
    assert code == EXIT_ERROR
    assert "error:" in capsys.readouterr().err
    shutdowns = [e for e in _ledger(runtime_dir) if e["event_type"] == "run.shutdown"]
    assert shutdowns[-1]["payload"]["exit_reason"] == "error"
    assert shutdowns[-1]["payload"]["exit_code"] == EXIT_ERROR


@pytest.mark.parametrize("q", ["0,1", "0,1,2,3"])
def test_info_rejects_iteration_vector_of_wrong_shape(tmp_path, runtime_dir, capsys, q):
    src = _synth(tmp_path, "--dims", "6,5,4")
    assert main(["info", "--input", str(src), "--k", "2", "--q", q]) == EXIT_ERROR
    assert "error:" in capsys.readouterr().err
    shutdowns = [e for e in _ledger(runtime_dir) if e["event_type"] == "run.shutdown"]
    assert shutdowns[-1]["payload"]["exit_reason"] == "error"
    assert shutdowns[-1]["payload"]["exit_code"] == EXIT_ERROR


def test_info_accepts_mirrored_iteration_vector(tmp_path, capsys):
    src = _synth(tmp_path, "--dims", "6,5,4")
    out = tmp_path / "info.json"
    assert main(["info", "--input", str(src), "--k", "2", "--p", "1", "--q", "0,1,2,1", "--out", str(out)]) == EXIT_OK
    info = json.loads(out.read_text(encoding="utf-8"))
    assert info["flops_rtsvd"] > 0


def test_invalid_config_exits_before_boot(tmp_path, runtime_dir):
    assert main(["decompose", "--input", "missing.tt3", "--k", "0"]) == EXIT_ERROR
    assert not (runtime_dir / "events.jsonl").exists()


def test_flag_beats_config_file_beats_env(tmp_path, monkeypatch):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"p": 3, "seed": 7, "workers": 2, "k": [5]}), encoding="utf-8")
    monkeypatch.setenv("RTSVD_WORKERS", "3")
    parser = build_parser()

    cfg = build_run_config(parser.parse_args(["decompose", "--config", str(cfg_file), "--seed", "9"]))
    assert (cfg.p, cfg.seed, cfg.workers, cfg.k) == (3, 9, 2, (5,))

    cfg = build_run_config(parser.parse_args(["decompose", "--k", "2"]))
    assert (cfg.p, cfg.workers, cfg.k) == (10, 3, (2,))

    cfg = build_run_config(parser.parse_args(["decompose", "--k", "2", "--workers", "1"]))
    assert cfg.workers == 1


def test_unknown_config_key_is_an_error(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"oversampling": 3}), encoding="utf-8")
    assert main(["decompose", "--config", str(cfg_file), "--k", "2"]) == EXIT_ERROR


@pytest.mark.slow
@pytest.mark.skipif((os.cpu_count() or 1) < 4, reason="needs 4 cores")
def test_workers_speed_up_large_decomposition(tmp_path):
    src = _synth(tmp_path, "--kind", "random", "--dims", "192,512,64", name="big.tt3")
    timings = {}
    for w in ("1", "4"):
        argv = ["decompose", "--input", str(src), "--method", "tsvd", "--k", "25", "--workers", w, "--out", str(tmp_path / w)]
        t0 = time.perf_counter()
        assert main(argv) == EXIT_OK
        timings[w] = time.perf_counter() - t0
    assert timings["4"] < timings["1"]
