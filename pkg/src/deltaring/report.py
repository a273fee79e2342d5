"""JSON-lines report records with a fixed field order."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Optional

FIELDS = ("subject", "operation", "verdict", "counts", "witnesses", "duration")


@dataclass
class Report:
    subject: str
    operation: str
    verdict: Optional[bool] = None
    counts: dict = field(default_factory=dict)
    witnesses: list[str] = field(default_factory=list)
    duration: Optional[float] = None

    def to_json(self) -> str:
        rec = {k: getattr(self, k) for k in FIELDS}
        return json.dumps(rec, separators=(", ", ": "))


@contextmanager
def stopwatch(report: Report, enabled: bool):
    """Fill ``report.duration`` (rounded seconds) when timing is enabled."""
    start = time.perf_counter()
    try:
        yield report
    finally:
        if enabled:
            report.duration = round(time.perf_counter() - start, 3)
