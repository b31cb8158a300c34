"""Structured reports: a list of named checks with verdicts, serialised to JSON or a text table."""

from __future__ import annotations

import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from .errors import ReportIoError

PASS, FAIL, WARN = "pass", "fail", "warn"
SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    verdict: str
    residual_poly: str = "0"
    sup_norm: float | None = 0.0
    tolerance: float | None = 0.0
    code: str | None = None
    detail: str = ""

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, WARN):
            raise ValueError(f"bad verdict {self.verdict!r}")


@dataclass
class Report:
    command: str
    scenario: str
    seed: int
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def verdict(self) -> str:
        return verdict_of(self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.verdict == FAIL), None)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "scenario": self.scenario,
            "seed": self.seed,
            "verdict": self.verdict,
            "first_failure": self.first_failure.name if self.first_failure else None,
            "checks": [asdict(c) for c in self.checks],
            "data": self.data,
            "notes": list(self.notes),
        }


def verdict_of(checks) -> str:
    verdicts = [c.verdict if isinstance(c, Check) else c["verdict"] for c in checks]
    return FAIL if FAIL in verdicts else PASS


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n"


def _fmt(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.3e}"
    return str(v)


def to_text(report: Report) -> str:
    lines = [f"command : {report.command}", f"scenario: {report.scenario}", f"seed    : {report.seed}",
             f"verdict : {report.verdict.upper()}", ""]
    w = max([len(c.name) for c in report.checks] + [5])
    lines.append(f"{'check':<{w}}  verdict  {'sup_norm':>10}  {'tol':>10}  residual")
    lines.append("-" * (w + 48))
    for c in report.checks:
        res = c.residual_poly if len(c.residual_poly) <= 60 else c.residual_poly[:57] + "..."
        code = f" [{c.code}]" if c.code else ""
        lines.append(f"{c.name:<{w}}  {c.verdict:<7}  {_fmt(c.sup_norm):>10}  {_fmt(c.tolerance):>10}  {res}{code}")
        if c.detail:
            lines.append(f"{'':<{w}}    {c.detail}")
    for n in report.notes:
        lines.append(f"note: {n}")
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "json", out: str | Path | None = None) -> str:
    """Serialise and write to ``out`` (standard output when None); returns the text."""
    if fmt not in ("json", "text"):
        raise ValueError(f"unknown format {fmt!r}")
    text = to_json(report) if fmt == "json" else to_text(report)
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ReportIoError(f"cannot write report to {out}: {exc.strerror}") from None
    return text


def read_report(text: str) -> dict:
    """Parse a JSON report and re-derive the root verdict from its checks."""
    doc = json.loads(text)
    doc["derived_verdict"] = verdict_of(doc["checks"])
    return doc
