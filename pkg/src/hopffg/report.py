"""Verification reports with a fixed machine schema and a text template."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Failure:
    location: object  # multidegree tuple, generator/axiom string, or chain index
    residual: str

    def location_json(self):
        if isinstance(self.location, tuple):
            return list(self.location)
        return self.location


@dataclass
class VerificationReport:
    subject: str
    check: str
    verdict: str  # "pass" | "fail" | "error"
    cutoff: int | None
    failures: list[Failure]
    timing_ms: float = 0.0
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in ("pass", "fail", "error"):
            raise ValueError(f"bad verdict {self.verdict!r}")

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_machine(self):
        """Single JSON object; key order fixed, notes are text-only extras."""
        obj = {
            "subject": self.subject,
            "check": self.check,
            "verdict": self.verdict,
            "cutoff": self.cutoff,
            "failures": [
                {"location": f.location_json(), "residual": f.residual}
                for f in self.failures
            ],
            "timing_ms": round(self.timing_ms, 3),
        }
        return json.dumps(obj, separators=(",", ":"))

    def to_text(self, color=False):
        tag = self.verdict.upper()
        if color:
            code = {"pass": "32", "fail": "31", "error": "33"}[self.verdict]
            tag = f"\x1b[{code}m{tag}\x1b[0m"
        cut = "-" if self.cutoff is None else str(self.cutoff)
        lines = [
            f"[{tag}] subject={self.subject} check={self.check} cutoff={cut}"
            f" ({self.timing_ms:.1f} ms)"
        ]
        for f in self.failures:
            loc = f.location_json()
            if isinstance(loc, list):
                loc = "[" + ",".join(str(x) for x in loc) + "]"
            lines.append(f"  at {loc}: {f.residual}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


def make_report(subject, check, cutoff, failures, started_at=None, notes=None):
    import time

    ms = 0.0 if started_at is None else (time.perf_counter() - started_at) * 1000.0
    return VerificationReport(
        subject=subject,
        check=check,
        verdict="fail" if failures else "pass",
        cutoff=cutoff,
        failures=failures,
        timing_ms=ms,
        notes=notes or [],
    )
