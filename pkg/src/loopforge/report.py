"""Check records and their text/JSON rendering."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass(frozen=True)
class CheckRecord:
    """One verification result.

    ``ref`` states the mathematical fact being checked.  ``verdict`` is
    ``pass``, ``fail`` or ``info`` (informational, never a failure).
    """

    name: str
    ref: str
    verdict: str
    witness: Any = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ref": self.ref,
            "verdict": self.verdict,
            "witness": self.witness,
            "detail": self.detail,
        }

    def line(self) -> str:
        mark = {PASS: "PASS", FAIL: "FAIL", INFO: "INFO"}[self.verdict]
        out = f"[{mark}] {self.name}: {self.ref}"
        if self.detail:
            out += f" -- {self.detail}"
        if self.witness is not None:
            out += f" (witness: {format_witness(self.witness)})"
        return out


def record(name: str, ref: str, ok: bool | None, witness: Any = None, detail: str = "") -> CheckRecord:
    verdict = INFO if ok is None else (PASS if ok else FAIL)
    return CheckRecord(name, ref, verdict, witness, detail)


def format_witness(w: Any) -> str:
    if isinstance(w, dict):
        return ", ".join(f"{k}={v}" for k, v in w.items())
    if isinstance(w, (list, tuple)):
        return "(" + ", ".join(str(v) for v in w) + ")"
    return str(w)


def all_passed(records: Iterable[CheckRecord]) -> bool:
    return all(r.passed for r in records)


@dataclass
class Report:
    """A document of named sections plus check records, in insertion order."""

    title: str
    sections: dict[str, Any] = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, records: Sequence[CheckRecord] | CheckRecord) -> None:
        if isinstance(records, CheckRecord):
            self.checks.append(records)
        else:
            self.checks.extend(records)

    @property
    def passed(self) -> bool:
        return all_passed(self.checks)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            **self.sections,
            "checks": [c.to_dict() for c in self.checks],
            "summary": {
                "total": len(self.checks),
                "failed": sum(c.verdict == FAIL for c in self.checks),
                "passed": self.passed,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        for key, value in self.sections.items():
            lines.append(f"{key}: {_text_value(value)}")
        if self.checks:
            lines.append("checks:")
            lines += ["  " + c.line() for c in self.checks]
            failed = sum(c.verdict == FAIL for c in self.checks)
            lines.append(f"summary: {len(self.checks)} checks, {failed} failed")
        return "\n".join(lines) + "\n"


def _text_value(v: Any) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)
