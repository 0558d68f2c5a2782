"""Append-only JSONL ledger of finished grid runs."""
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import structlog
from dataclasses_json import dataclass_json

logger = structlog.get_logger(__name__)

STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass_json
@dataclass
class LedgerEntry:
    run_key: str
    combo_index: int
    seed: int
    status: str
    final_metric: Optional[float] = None
    error: Optional[str] = None
    epoch: Optional[int] = None
    wall_time: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


class RunLedger:
    """One JSON line per finished run; without a path entries live in memory only.

    A torn last line from an interrupted write is skipped on load.
    """

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._entries: Dict[str, LedgerEntry] = {}
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        text = self.path.read_text(encoding="utf-8")
        if text and not text.endswith("\n"):
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write("\n")
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                entry = LedgerEntry.from_dict(json.loads(line))
            except (ValueError, KeyError, TypeError):
                logger.warning("ledger_line_skipped", path=str(self.path), line=number)
                continue
            self._entries[entry.run_key] = entry
        logger.info("ledger_loaded", path=str(self.path), entries=len(self._entries))

    def __contains__(self, run_key: str) -> bool:
        return run_key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, run_key: str) -> Optional[LedgerEntry]:
        return self._entries.get(run_key)

    def entries(self) -> List[LedgerEntry]:
        return list(self._entries.values())

    def append(self, entry: LedgerEntry):
        with self._lock:
            self._entries[entry.run_key] = entry
            if self.path is None:
                return
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
