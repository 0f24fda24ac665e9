# scripts/observability/obs_aggregate_runs.py
"""
Summarize runtime_data/observability/observability_events.jsonl: span
latencies per finished event type, per-run status and event counts per layer.

    python -m scripts.observability.obs_aggregate_runs --out runs_summary.json [--day 2026-01-31]
"""
from __future__ import annotations

import argparse
import json
from collections import defaultdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from rtsvd import paths


def parse_day(ts: str) -> str:
    # expects ISO-8601 with Z
    dt = datetime.fromisoformat(ts.replace("Z", "+00:00"))
    return dt.astimezone(timezone.utc).date().isoformat()


def pctile(values: Sequence[float], p: float) -> Optional[float]:
    if not values:
        return None
    vs = sorted(values)
    k = int(round((p / 100.0) * (len(vs) - 1)))
    k = max(0, min(k, len(vs) - 1))
    return vs[k]


def stats(values: Sequence[float]) -> Dict[str, Any]:
    if not values:
        return {"count": 0, "min": None, "max": None, "p50": None, "p95": None, "mean": None}
    return {
        "count": len(values),
        "min": min(values),
        "max": max(values),
        "p50": pctile(values, 50),
        "p95": pctile(values, 95),
        "mean": sum(values) / len(values),
    }


def read_events(path: Path) -> List[Dict[str, Any]]:
    events = []
    with path.open("r", encoding="utf-8") as f:
        for idx, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                events.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"Invalid JSON in {path} at line {idx}") from exc
    return events


def summarize(events: Iterable[Dict[str, Any]], day: Optional[str] = None) -> Dict[str, Any]:
    latency_by_type: Dict[str, List[int]] = defaultdict(list)
    events_by_layer: Dict[str, int] = defaultdict(int)
    runs: Dict[str, Dict[str, Any]] = {}

    for ev in events:
        if day is not None and parse_day(ev["timestamp"]) != day:
            continue
        et = ev.get("event_type", "unknown")
        rid = ev.get("run_id", "unknown")
        events_by_layer[ev.get("layer", "unknown")] += 1

        run = runs.setdefault(rid, {"events": 0, "status": "unfinished", "command": None, "latency_ms": None})
        run["events"] += 1
        payload = ev.get("payload") or {}
        if et.endswith(".started") and "command" in payload:
            run["command"] = payload["command"]

        lat = ev.get("latency_ms")
        if isinstance(lat, int):
            latency_by_type[et].append(lat)
            # the outermost span finishes last
            if et.endswith(".finished") and "status" in payload:
                run["status"] = payload["status"]
                run["latency_ms"] = lat

    runs_by_status: Dict[str, int] = defaultdict(int)
    for run in runs.values():
        runs_by_status[run["status"]] += 1

    return {
        "schema": "observability.runs_summary.v1",
        "day": day,
        "runs_total": len(runs),
        "runs_by_status": dict(runs_by_status),
        "events_by_layer": dict(events_by_layer),
        "latency_ms_by_event_type": {k: stats(v) for k, v in sorted(latency_by_type.items())},
        "runs": runs,
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--events", help="path to observability_events.jsonl (default: runtime_data)")
    ap.add_argument("--day", help="YYYY-MM-DD (UTC day); all days when omitted")
    ap.add_argument("--out", required=True, help="output runs summary json")
    args = ap.parse_args(argv)

    src = Path(args.events) if args.events else paths.observability_events_path()
    events = read_events(src) if src.exists() else []
    summary = summarize(events, args.day)
    summary["source"] = {
        "event_log": str(src),
        "generated_at": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
    }
    out = paths.ensure_parent(args.out)
    with out.open("w", encoding="utf-8") as f:
        json.dump(summary, f, ensure_ascii=False, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
