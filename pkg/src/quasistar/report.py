"""Pass/fail bookkeeping for axiom and property checks."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CheckEntry:
    name: str
    axiom: str  # the identity or property being checked, spelled out
    passed: bool
    residual: float
    tol: float
    value: float | None = None  # reported quantity (a bound, a rank) when not a residual

    def as_dict(self):
        d = {
            "name": self.name,
            "anchor": self.axiom,
            "passed": bool(self.passed),
            "residual": float(self.residual),
            "tol": float(self.tol),
        }
        if self.value is not None:
            d["value"] = float(self.value)
        return d


@dataclass
class VerificationReport:
    title: str
    entries: list[CheckEntry] = field(default_factory=list)

    def add(self, name, axiom, residual, tol, passed=None, value=None):
        residual = float(residual)
        if passed is None:
            passed = bool(np.isfinite(residual) and residual <= tol)
        value = None if value is None else float(value)
        entry = CheckEntry(name, axiom, bool(passed), residual, float(tol), value)
        self.entries.append(entry)
        return entry

    def extend(self, other: "VerificationReport", prefix=""):
        for e in other.entries:
            self.entries.append(
                CheckEntry(prefix + e.name, e.axiom, e.passed, e.residual, e.tol, e.value)
            )

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def max_residual(self) -> float:
        vals = [e.residual for e in self.entries if np.isfinite(e.residual)]
        return max(vals, default=0.0)

    def __getitem__(self, name) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self):
        return [e.name for e in self.entries]

    def as_dict(self):
        return {
            "title": self.title,
            "passed": self.passed,
            "entries": [e.as_dict() for e in self.entries],
        }

    def render(self) -> str:
        lines = [f"== {self.title} =="]
        for e in self.entries:
            flag = "PASS" if e.passed else "FAIL"
            extra = "" if e.value is None else f" value={e.value:.6g}"
            lines.append(
                f"  [{flag}] {e.name:<30} residual={e.residual:.3e} tol={e.tol:.1e}{extra}  ({e.axiom})"
            )
        return "\n".join(lines)
