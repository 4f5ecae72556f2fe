"""Verification reports: named checks with concrete failure witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List, Optional


@dataclass
class Check:
    name: str
    passed: bool
    witness: Optional[Any] = None  # JSON-able tuple reproducing a failure

    def to_dict(self):
        d = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    suite: str
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name: str, passed: bool, witness=None):
        self.checks.append(Check(name, bool(passed), None if passed else witness))

    def merge(self, other: "Report"):
        for chk in other.checks:
            self.checks.append(Check(f"{other.suite}.{chk.name}", chk.passed, chk.witness))
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "suite": self.suite,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "notes": sorted(self.notes),
            "ok": self.ok,
        }

    def summary_lines(self):
        lines = [f"[{ 'PASS' if c.passed else 'FAIL' }] {self.suite}.{c.name}"
                 + (f"  witness={c.witness}" if not c.passed and c.witness is not None else "")
                 for c in sorted(self.checks, key=lambda c: c.name)]
        lines.extend(f"note: {n}" for n in sorted(self.notes))
        return lines
