"""Deterministic verification reports."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

# failures beyond this many are counted but not stored
MAX_STORED_FAILURES = 50


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        # numpy scalars
        return obj.item()
    return obj


@dataclass
class VerificationReport:
    check: str
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    trials: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    failure_count: int = 0
    details: Dict[str, Any] = field(default_factory=dict)
    wall_time_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record(self, **counterexample):
        self.failure_count += 1
        if len(self.failures) < MAX_STORED_FAILURES:
            self.failures.append(counterexample)

    def tick(self, n: int = 1):
        self.trials += n

    def merge(self, other: "VerificationReport", tag: Optional[Dict[str, Any]] = None):
        """Fold a sub-report in; counterexamples get the sub-report's tag."""
        self.trials += other.trials
        for f in other.failures:
            rec = dict(tag or {})
            rec.update(f)
            if len(self.failures) < MAX_STORED_FAILURES:
                self.failures.append(rec)
        self.failure_count += other.failure_count
        self.wall_time_ms += other.wall_time_ms

    def to_dict(self, with_time: bool = True) -> Dict[str, Any]:
        d = {
            "check": self.check,
            "params": _jsonable(self.params),
            "seed": self.seed,
            "trials": self.trials,
            "failures": _jsonable(self.failures),
            "failure_count": self.failure_count,
            "pass": self.passed,
            "details": _jsonable(self.details),
        }
        if with_time:
            d["wall_time_ms"] = self.wall_time_ms
        return d

    def to_json(self, with_time: bool = True) -> str:
        return json.dumps(self.to_dict(with_time), sort_keys=True, indent=2) + "\n"

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check}: {self.trials} trials, {self.failure_count} failures"

    @contextmanager
    def timed(self):
        t0 = time.perf_counter()
        try:
            yield self
        finally:
            self.wall_time_ms += int((time.perf_counter() - t0) * 1000)
