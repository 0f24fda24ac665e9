from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Any, Dict, Literal, Optional

from rtsvd import trace_context
from rtsvd.event_ledger import EventLedger, config_digest

BootMode = Literal["cold", "warm", "recover"]


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class BootContext:
    process_id: str
    run_id: str
    command: str
    boot_mode: BootMode
    started_at: str
    recovered_from_run_id: Optional[str] = None


def _get_last_run_status(ledger: EventLedger) -> Dict[str, Any]:
    """
    Find the last run.boot and check whether a matching run.shutdown exists.
    A boot without shutdown means the previous CLI run died mid-flight.
    """
    last_boot = None
    shutdown_run_ids = set()
    for ev in ledger.read_all():
        et = ev.get("event_type")
        rid = (ev.get("payload") or {}).get("run_id")
        if et == "run.boot":
            last_boot = ev
        elif et == "run.shutdown" and rid:
            shutdown_run_ids.add(rid)

    if not last_boot:
        return {"status": "no_boot_found"}

    rid = (last_boot.get("payload") or {}).get("run_id")
    if rid and rid not in shutdown_run_ids:
        return {"status": "incomplete", "recovered_from_run_id": rid}
    return {"status": "complete", "last_run_id": rid}


def boot(*, ledger: EventLedger, command: str, config: Optional[Dict[str, Any]] = None) -> BootContext:
    process_id = trace_context.new_process_id()
    run_id = trace_context.new_run_id()

    recovered_from: Optional[str] = None
    status = _get_last_run_status(ledger)
    if status["status"] == "no_boot_found":
        boot_mode: BootMode = "cold"
    elif status["status"] == "incomplete":
        boot_mode = "recover"
        recovered_from = status.get("recovered_from_run_id")
    else:
        boot_mode = "warm"

    ctx = BootContext(
        process_id=process_id,
        run_id=run_id,
        command=command,
        boot_mode=boot_mode,
        started_at=_utc_now_iso(),
        recovered_from_run_id=recovered_from,
    )

    # Context first, so every downstream event carries the run_id.
    trace_context.set_run_context(ctx.process_id, ctx.run_id, command)

    ledger.append(
        "run.boot",
        {
            "process_id": ctx.process_id,
            "run_id": ctx.run_id,
            "boot_mode": ctx.boot_mode,
            "started_at": ctx.started_at,
            "recovered_from_run_id": ctx.recovered_from_run_id,
            "config": config or {},
            "config_digest": config_digest(config or {}),
        },
        command=command,
    )
    return ctx
