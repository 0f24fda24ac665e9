# rtsvd/trace_context.py
from __future__ import annotations

import contextvars
import uuid

# Process-level identity context; run_id is authoritative once boot() has run.
_process_id_var: contextvars.ContextVar[str | None] = contextvars.ContextVar("process_id", default=None)
_run_id_var: contextvars.ContextVar[str | None] = contextvars.ContextVar("run_id", default=None)
_command_var: contextvars.ContextVar[str | None] = contextvars.ContextVar("command", default=None)


def new_run_id() -> str:
    return f"run_{uuid.uuid4().hex}"


def new_process_id() -> str:
    return f"proc_{uuid.uuid4().hex}"


def set_run_context(process_id: str | None, run_id: str | None, command: str | None = None) -> None:
    _process_id_var.set(process_id)
    _run_id_var.set(run_id)
    _command_var.set(command)


def clear_run_context() -> None:
    set_run_context(None, None, None)


def get_process_id() -> str | None:
    return _process_id_var.get()


def get_run_id() -> str | None:
    return _run_id_var.get()


def get_command() -> str | None:
    return _command_var.get()
