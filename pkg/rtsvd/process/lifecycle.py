from __future__ import annotations

from rtsvd import trace_context
from rtsvd.event_ledger import EventLedger
from rtsvd.process.boot import BootContext


def shutdown(
    *,
    ledger: EventLedger,
    ctx: BootContext,
    exit_reason: str = "normal",
    exit_code: int = 0,
) -> None:
    ledger.append(
        "run.shutdown",
        {
            "process_id": ctx.process_id,
            "run_id": ctx.run_id,
            "exit_reason": exit_reason,
            "exit_code": exit_code,
        },
        command=ctx.command,
    )
    trace_context.clear_run_context()
