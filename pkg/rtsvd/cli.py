# rtsvd/cli.py
"""
Command line entry point: python -m rtsvd <command> [flags].

Every command boots a run (run.boot / run.shutdown in the run ledger),
wraps its work in an observability span and maps TSVDError to exit code 2.
Flag values win over the config file, which wins over RTSVD_WORKERS and
the built-in defaults.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import paths
from .benchmark import run_error_benchmark
from .bounds import flop_estimate
from .config import (
    DEFAULT_CONFIG,
    FORMATS,
    METHODS,
    RunConfig,
    load_config,
    parse_int_list,
    resolve_workers,
)
from .crossval import cross_validate
from .errors import ConfigError, TSVDError
from .event_ledger import EventLedger
from .executor import SliceExecutor
from .images import Layout, load_image_dir, save_image_dir
from .observability import span_finish, span_start
from .process import boot, shutdown
from .randomized import choose_iterations, rtsvd_subspace
from .reports import (
    timing_path,
    write_bench,
    write_cv_rates,
    write_error_report,
    write_json,
    write_recognition_table,
)
from .sketch import SketchConfig
from .synthetic import (
    decaying_spectrum,
    low_rank_tensor,
    random_tensor,
    separable_faces,
    step_spectrum,
    tensor_with_spectrum,
)
from .tensor import frobenius_norm
from .tensor_file import load_tensor, read_header, save_tensor
from .tsvd import reconstruct, relative_optimal_error, singular_spectrum, tsvd_truncated

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 2

_SPAN_PREFIX = {
    "decompose": "decompose.run",
    "bench-error": "bench.run",
    "recognize": "recognition.run",
    "cross-validate": "recognition.cv",
    "info": "io.info",
    "synth": "io.synth",
}

SYNTH_KINDS = ("random", "low-rank", "step", "decay", "faces")


# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------


def configure_logging(level: str = "INFO") -> List[logging.Handler]:
    """stderr plus runtime_data/logs/rtsvd.log on the package logger."""
    root = logging.getLogger("rtsvd")
    root.setLevel(level.upper())
    fmt = logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
    handlers: List[logging.Handler] = [
        logging.StreamHandler(sys.stderr),
        logging.FileHandler(paths.get_log_file(), encoding="utf-8"),
    ]
    for h in handlers:
        h.setFormatter(fmt)
        root.addHandler(h)
    return handlers


def _release_logging(handlers: Sequence[logging.Handler]) -> None:
    root = logging.getLogger("rtsvd")
    for h in handlers:
        root.removeHandler(h)
        h.close()


# ---------------------------------------------------------------------------
# Parser and config
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--out", help="output file or directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, help="worker threads (default: config, then $RTSVD_WORKERS, then 1)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--log-level", default="INFO")


def _add_sketch(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", help="truncation term (comma list where a command sweeps it)")
    p.add_argument("--p", type=int, help="oversampling")
    p.add_argument("--q", help="iteration count(s), comma separated")
    p.add_argument("--eps", type=float, help="tolerance for the per-slice iteration rule")
    p.add_argument("--delta", type=float, help="failure probability of the tail bound")
    p.add_argument("--no-symmetry", action="store_true", help="compute every Fourier slice instead of mirroring")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtsvd", description="t-product algebra, t-SVD and randomized t-SVD")
    sub = ap.add_subparsers(dest="command", required=True)

    dec = sub.add_parser("decompose", help="factor a tensor file into U, S, V")
    _add_common(dec)
    _add_sketch(dec)
    dec.add_argument("--input", help="TensorFile (.tt3)")
    dec.add_argument("--method", choices=METHODS)

    bench = sub.add_parser("bench-error", help="relative error of rt-SVD against the minimal error")
    _add_common(bench)
    _add_sketch(bench)
    bench.add_argument("--input", help="TensorFile (.tt3)")
    bench.add_argument("--trials", type=int)

    for name, help_text in (
        ("recognize", "cross-validated recognition rates, table per fold"),
        ("cross-validate", "raw per-fold per-trial recognition rates"),
    ):
        rec = sub.add_parser(name, help=help_text)
        _add_common(rec)
        _add_sketch(rec)
        rec.add_argument("--input", help="image directory (<label>/<image>) or TensorFile with --labels")
        rec.add_argument("--method", help=f"comma list of {', '.join(METHODS)}")
        rec.add_argument("--trials", type=int)
        rec.add_argument("--folds", type=int)
        rec.add_argument("--layout", choices=[l.value for l in Layout], default=Layout.LATERAL.value)
        rec.add_argument("--standardize", action="store_true", default=None)

    info = sub.add_parser("info", help="header, norm, spectrum summary and cost estimates of a tensor file")
    _add_common(info)
    _add_sketch(info)
    info.add_argument("--input", help="TensorFile (.tt3)")

    syn = sub.add_parser("synth", help="write a synthetic tensor file or face directory")
    _add_common(syn)
    syn.add_argument("--kind", choices=SYNTH_KINDS, default="random")
    syn.add_argument("--dims", default="20,16,8", help="n1,n2,n3 (faces: rows,cols,ignored)")
    syn.add_argument("--rank", type=int, default=4)
    syn.add_argument("--k", type=int, default=4)
    syn.add_argument("--tau", type=float, default=0.9)
    syn.add_argument("--rate", type=float, default=0.8)
    syn.add_argument("--classes", type=int, default=3)
    syn.add_argument("--per-class", type=int, default=10)
    syn.add_argument("--noise", type=float, default=0.01)
    return ap


def _pick(flag: Any, file_cfg: Dict[str, Any], key: str) -> Any:
    return flag if flag is not None else file_cfg.get(key, DEFAULT_CONFIG.get(key))


def build_run_config(args: argparse.Namespace) -> RunConfig:
    file_cfg = load_config(getattr(args, "config", None))
    method_flag = getattr(args, "method", None)
    methods: Sequence[str]
    if method_flag and "," in method_flag:
        methods = tuple(m.strip() for m in method_flag.split(",") if m.strip())
        method = methods[0]
    elif method_flag:
        methods = (method_flag,)
        method = method_flag
    else:
        method = file_cfg.get("method", DEFAULT_CONFIG["method"])
        methods = tuple(file_cfg.get("methods", DEFAULT_CONFIG["methods"]))
    k_raw = getattr(args, "k", None)
    if args.command == "synth":
        k_raw = None
    q_raw = getattr(args, "q", None)
    standardize = getattr(args, "standardize", None)
    no_symmetry = bool(getattr(args, "no_symmetry", False))
    return RunConfig(
        command=args.command,
        input=_pick(getattr(args, "input", None), file_cfg, "input"),
        out=_pick(args.out, file_cfg, "out"),
        k=parse_int_list(_pick(k_raw, file_cfg, "k")),
        p=int(_pick(getattr(args, "p", None), file_cfg, "p")),
        q=parse_int_list(_pick(q_raw, file_cfg, "q")) or (0,),
        eps=_pick(getattr(args, "eps", None), file_cfg, "eps"),
        delta=float(_pick(getattr(args, "delta", None), file_cfg, "delta")),
        seed=int(_pick(args.seed, file_cfg, "seed")),
        workers=resolve_workers(args.workers, file_cfg.get("workers") if args.config else None),
        method=method,
        methods=tuple(methods),
        trials=int(_pick(getattr(args, "trials", None), file_cfg, "trials")),
        folds=int(_pick(getattr(args, "folds", None), file_cfg, "folds")),
        format=_pick(args.format, file_cfg, "format"),
        q_max=int(file_cfg.get("q_max", DEFAULT_CONFIG["q_max"])),
        tol=float(file_cfg.get("tol", DEFAULT_CONFIG["tol"])),
        dense_budget=int(file_cfg.get("dense_budget", DEFAULT_CONFIG["dense_budget"])),
        exploit_symmetry=False if no_symmetry else bool(file_cfg.get("exploit_symmetry", True)),
        standardize=bool(_pick(standardize, file_cfg, "standardize")),
    )


def _require(value: Any, what: str) -> Any:
    if value in (None, (), ""):
        raise ConfigError(f"{what} is required")
    return value


def _q_setting(q: Sequence[int]):
    """One value is a scalar count; several values are a per-slice vector."""
    return int(q[0]) if len(q) == 1 else tuple(q)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_decompose(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    a = load_tensor(_require(cfg.input, "--input"))
    k = _require(cfg.k, "--k")[0]
    out_dir = Path(cfg.out or "decompose_out")
    executor = SliceExecutor(cfg.workers)
    extra: Dict[str, Any] = {"method": cfg.method, "dims": list(a.dims), "workers": cfg.workers}
    summary: Optional[Dict[str, Any]]

    t0 = time.perf_counter()
    if cfg.method == "tsvd":
        factors = tsvd_truncated(a, k, executor=executor, exploit_symmetry=cfg.exploit_symmetry)
        wall = time.perf_counter() - t0
        norm = frobenius_norm(a)
        residual = frobenius_norm(a - reconstruct(factors))
        summary = {
            "k": k,
            "norm": norm,
            "realized": residual / norm if norm > 0 else 0.0,
            "optimal": relative_optimal_error(factors, k),
        }
    else:
        sketch = SketchConfig(
            k=k,
            p=cfg.p,
            q=0 if cfg.method == "rtsvd" else _q_setting(cfg.q),
            eps=cfg.eps,
            seed=cfg.seed,
            q_max=cfg.q_max,
        )
        spec = singular_spectrum(a, executor=executor, exploit_symmetry=cfg.exploit_symmetry)
        if cfg.method == "rtsvd-q" and cfg.eps is not None:
            sketch = sketch.clamp(a.n1, a.n2)
            sketch = sketch.with_q(choose_iterations(spec, k, sketch.p, cfg.eps, q_max=cfg.q_max))
        t0 = time.perf_counter()
        factors, report = rtsvd_subspace(
            a, sketch, executor=executor, exploit_symmetry=cfg.exploit_symmetry, spectrum=spec, delta=cfg.delta
        )
        wall = time.perf_counter() - t0
        summary = None
        write_error_report(report, out_dir / "report.json", **extra)

    save_tensor(factors.u, out_dir / "U.tt3")
    save_tensor(factors.s, out_dir / "S.tt3")
    save_tensor(factors.v, out_dir / "V.tt3")
    if summary is not None:
        write_json(out_dir / "report.json", {**summary, **extra})
    write_json(timing_path(out_dir / "report.json"), {"wall_time": wall})
    logger.info("decompose %s k=%d done in %.3fs -> %s", cfg.method, k, wall, out_dir)
    return {"out": str(out_dir), "wall_time": wall}


def cmd_bench_error(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    a = load_tensor(_require(cfg.input, "--input"))
    ks = _require(cfg.k, "--k")
    rows = run_error_benchmark(
        a,
        ks,
        cfg.q,
        p=cfg.p,
        trials=cfg.trials,
        seed=cfg.seed,
        delta=cfg.delta,
        executor=SliceExecutor(cfg.workers),
        exploit_symmetry=cfg.exploit_symmetry,
    )
    out = Path(cfg.out or f"bench_error.{cfg.format}")
    write_bench(rows, out, cfg.format)
    logger.info("bench-error wrote %d rows -> %s", len(rows), out)
    return {"out": str(out), "rows": len(rows)}


def _load_dataset(cfg: RunConfig, args: argparse.Namespace):
    return load_image_dir(_require(cfg.input, "--input"), Layout(getattr(args, "layout", Layout.LATERAL.value)))


def _run_cv(cfg: RunConfig, args: argparse.Namespace):
    data = _load_dataset(cfg, args)
    k = _require(cfg.k, "--k")[0]
    return cross_validate(
        data,
        k,
        cfg.methods,
        folds=cfg.folds,
        trials=cfg.trials,
        seed=cfg.seed,
        p=cfg.p,
        q=_q_setting(cfg.q),
        eps=cfg.eps,
        standardize=cfg.standardize,
        workers=cfg.workers,
        exploit_symmetry=cfg.exploit_symmetry,
    )


def cmd_recognize(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    """Table of mean/min/max rates per method and fold, plus the full report as JSON."""
    report = _run_cv(cfg, args)
    out_dir = Path(cfg.out or "recognize_out")
    write_recognition_table(report, out_dir / "recognition_rates.csv")
    write_json(out_dir / "cv_report.json", report.to_dict())
    write_json(timing_path(out_dir / "cv_report.json"), report.timing_dict())
    return {"out": str(out_dir)}


def cmd_cross_validate(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    report = _run_cv(cfg, args)
    out = Path(cfg.out or f"cv_rates.{cfg.format}")
    write_cv_rates(report, out, cfg.format)
    write_json(timing_path(out), report.timing_dict())
    return {"out": str(out)}


def cmd_info(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    path = _require(cfg.input, "--input")
    header = read_header(path)
    if cfg.k:
        SketchConfig(k=cfg.k[0], p=cfg.p, q=_q_setting(cfg.q)).q_vector(header.dims[2])
    a = load_tensor(path)
    spec = singular_spectrum(a, executor=SliceExecutor(cfg.workers), exploit_symmetry=cfg.exploit_symmetry)
    info: Dict[str, Any] = {
        "path": str(path),
        "version": header.version,
        "dims": list(header.dims),
        "norm": frobenius_norm(a),
        "sigma_max": float(spec.sigma_hat[:, 0].max()),
        "sigma_min": float(spec.sigma_hat[:, -1].min()),
    }
    if cfg.k:
        k = cfg.k[0]
        info.update(
            {
                "k": k,
                "relative_optimal_error": relative_optimal_error(spec, k),
                "tau": [float(t) for t in spec.tau(k)],
                "flops_tsvd": flop_estimate(header.dims, k, method="tsvd"),
                "flops_rtsvd": flop_estimate(header.dims, k, cfg.p, _q_setting(cfg.q), method="rtsvd"),
            }
        )
    if cfg.format == "json" or cfg.out:
        write_json(Path(cfg.out or "info.json"), info)
    for key, value in info.items():
        if key != "tau":
            print(f"{key}: {value}")
    return {"dims": list(header.dims)}


def _parse_dims(raw: str) -> List[int]:
    dims = list(parse_int_list(raw))
    if len(dims) != 3:
        raise ConfigError(f"--dims needs three integers, got {raw!r}")
    return dims


def cmd_synth(cfg: RunConfig, args: argparse.Namespace) -> Dict[str, Any]:
    n1, n2, n3 = _parse_dims(args.dims)
    seed = cfg.seed
    if args.kind == "faces":
        data = separable_faces(args.classes, args.per_class, n1, n2, noise=args.noise, seed=seed)
        out = save_image_dir(data, Path(cfg.out or "faces"))
        return {"out": str(out), "images": data.n_images}
    if args.kind == "random":
        t = random_tensor(n1, n2, n3, seed)
    elif args.kind == "low-rank":
        t = low_rank_tensor(n1, n2, n3, args.rank, seed)
    elif args.kind == "step":
        t = tensor_with_spectrum(n1, n2, step_spectrum(n3, min(n1, n2), args.k, args.tau), seed)
    else:
        t = tensor_with_spectrum(n1, n2, decaying_spectrum(n3, min(n1, n2), args.rate), seed)
    out = save_tensor(t, Path(cfg.out or f"{args.kind}.tt3"))
    return {"out": str(out), "dims": [n1, n2, n3]}


COMMANDS: Dict[str, Callable[[RunConfig, argparse.Namespace], Dict[str, Any]]] = {
    "decompose": cmd_decompose,
    "bench-error": cmd_bench_error,
    "recognize": cmd_recognize,
    "cross-validate": cmd_cross_validate,
    "info": cmd_info,
    "synth": cmd_synth,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = configure_logging(args.log_level)
    try:
        try:
            cfg = build_run_config(args)
        except TSVDError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR

        ledger = EventLedger(paths.events_ledger_path())
        ctx = boot(ledger=ledger, command=args.command, config=cfg.to_dict())
        exit_code, reason = EXIT_OK, "normal"
        prefix = _SPAN_PREFIX[args.command]
        token = span_start(f"{prefix}.started", ctx.run_id, payload={"command": args.command})
        try:
            result = COMMANDS[args.command](cfg, args)
            span_finish(token, f"{prefix}.finished", payload={"status": "ok", **result})
        except TSVDError as exc:
            exit_code, reason = EXIT_ERROR, "error"
            logger.error("%s failed: %s", args.command, exc)
            print(f"error: {exc}", file=sys.stderr)
            span_finish(token, f"{prefix}.finished", payload={"status": "error", "error_type": type(exc).__name__})
        finally:
            shutdown(ledger=ledger, ctx=ctx, exit_reason=reason, exit_code=exit_code)
        return exit_code
    finally:
        _release_logging(handlers)


if __name__ == "__main__":
    raise SystemExit(main())
