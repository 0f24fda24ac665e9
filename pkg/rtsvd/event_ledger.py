# rtsvd/event_ledger.py
"""
Append-only run ledger (runtime_data/events.jsonl).

One canonical JSON line per event, so two runs with the same configuration
produce byte-identical "config" payloads and the same config_digest.
"""
from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import LedgerCorrupt


def canonical_json(obj: Any) -> str:
    """Sorted keys, no whitespace, non-ASCII kept; numpy scalars and paths fall back to str."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=str)


def config_digest(config: Dict[str, Any]) -> str:
    """sha256 of the canonical form; key order never changes it."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


@dataclass
class EventLedger:
    path: Path

    def __post_init__(self) -> None:
        self.path = Path(self.path)

    def append(self, event_type: str, payload: Dict[str, Any], *, command: Optional[str] = None) -> None:
        record = {
            "ts": time.time(),
            "event_type": event_type,
            "command": command,
            "payload": payload,
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as f:
            f.write(canonical_json(record) + "\n")

    def read_all(self) -> List[Dict[str, Any]]:
        """Oldest first; [] when the ledger does not exist yet."""
        if not self.path.exists():
            return []
        events: List[Dict[str, Any]] = []
        with self.path.open("r", encoding="utf-8") as f:
            for idx, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    events.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise LedgerCorrupt(f"invalid JSON in {self.path} at line {idx}") from exc
        return events
