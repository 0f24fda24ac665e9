# rtsvd/observability.py
from __future__ import annotations

import json
import time
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from . import paths, trace_context

_LAYER_PREFIXES = (
    ("decompose.", "decomposition"),
    ("bench.", "benchmark"),
    ("recognition.", "recognition"),
    ("io.", "io"),
    ("config.", "config"),
)


def _iso_utc() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def _require_run_id(run_id: Optional[str], event_type: str) -> str:
    """run_id must be present and non-empty."""
    if run_id is None:
        raise ValueError(f"run_id is required for event_type={event_type}")
    if isinstance(run_id, str) and run_id.strip():
        return run_id
    raise ValueError(f"run_id must be non-empty for event_type={event_type}")


def _normalize_layer(event_type: str, layer: Optional[str]) -> str:
    if layer:
        return layer
    for prefix, name in _LAYER_PREFIXES:
        if event_type.startswith(prefix):
            return name
    return "runtime"


def emit_event(
    event_type: str,
    run_id: str,
    *,
    payload: Optional[Dict[str, Any]] = None,
    layer: Optional[str] = None,
    timestamp: Optional[str] = None,
    latency_ms: Optional[int] = None,
    process_id: Optional[str] = None,
) -> Dict[str, Any]:
    """Append one canonical event to the observability ledger and return the record."""
    run_id = _require_run_id(run_id, event_type)
    record: Dict[str, Any] = {
        "event_type": event_type,
        "run_id": run_id,
        "timestamp": timestamp or _iso_utc(),
        "layer": _normalize_layer(event_type, layer),
    }
    if process_id:
        record["process_id"] = process_id
    if latency_ms is not None:
        record["latency_ms"] = int(latency_ms)
    if payload:
        record["payload"] = payload
    line = json.dumps(record, ensure_ascii=False, default=str)
    with paths.observability_events_path().open("a", encoding="utf-8") as f:
        f.write(line + "\n")
    return record


def span_start(event_type: str, run_id: str, *, layer: Optional[str] = None, payload: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Start a span; returns a token carrying the monotonic start time."""
    start_perf = time.perf_counter()
    emit_event(event_type, run_id, payload=payload, layer=layer)
    return {"event_type": event_type, "run_id": run_id, "layer": layer, "start_perf": start_perf}


def span_finish(
    span_token: Dict[str, Any],
    finished_event_type: str,
    *,
    payload: Optional[Dict[str, Any]] = None,
) -> float:
    """Finish a span; emits the finished event with latency_ms and returns elapsed seconds."""
    elapsed = time.perf_counter() - span_token["start_perf"]
    emit_event(
        finished_event_type,
        span_token["run_id"],
        payload=payload,
        layer=span_token.get("layer"),
        latency_ms=int(elapsed * 1000),
    )
    return elapsed


def log_event(event_type: str, payload: Optional[Dict[str, Any]] = None, *, layer: Optional[str] = None) -> None:
    """
    Library-side emission. Outside a booted run there is no run_id and the
    event is dropped; library use never writes runtime files.
    """
    run_id = trace_context.get_run_id()
    if not run_id:
        return
    emit_event(
        event_type,
        run_id,
        payload=payload,
        layer=layer,
        process_id=trace_context.get_process_id(),
    )
