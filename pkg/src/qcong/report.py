"""Verification outcomes and their canonical serialised form."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

__all__ = ["Failure", "VerificationReport", "format_number", "dump_document", "load_document"]

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


def format_number(x: int | Fraction | None) -> str:
    """Exact decimal string; terminating fractions print as decimals (``663/2`` -> ``331.5``)."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        d = x.denominator
        twos = fives = 0
        while d % 2 == 0:
            d //= 2
            twos += 1
        while d % 5 == 0:
            d //= 5
            fives += 1
        if d != 1:
            return f"{x.numerator}/{x.denominator}"
        digits = max(twos, fives)
        scaled = x * 10**digits
        sign = "-" if scaled < 0 else ""
        whole, frac = divmod(abs(scaled.numerator), 10**digits)
        return f"{sign}{whole}.{frac:0{digits}d}"
    return str(int(x))


@dataclass
class Failure:
    params: dict[str, Any]
    index: int | Fraction | None
    residue: int | None

    def to_dict(self) -> dict:
        return {
            "params": {k: ("" if v is None else str(v)) for k, v in self.params.items()},
            "index": format_number(self.index),
            "residue": format_number(self.residue),
        }


@dataclass
class VerificationReport:
    """Outcome of one identity, oracle, recurrence or congruence sweep.

    ``status`` is derived: ``vacuous`` when nothing was checked, ``fail`` when
    any failure was recorded, ``pass`` otherwise.
    """

    id: str
    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    checks_run: int = 0
    failures: list[Failure] = field(default_factory=list)
    skipped: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    wall_ms: int = 0

    @property
    def status(self) -> str:
        if self.failures:
            return FAIL
        if self.checks_run == 0:
            return VACUOUS
        return PASS

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def add_failure(self, params: dict[str, Any], index, residue) -> None:
        self.failures.append(Failure(dict(params), index, residue))

    def skip(self, reason: str, count: int = 1) -> None:
        self.skipped[reason] = self.skipped.get(reason, 0) + count

    def finish(self, start: float) -> "VerificationReport":
        self.wall_ms = int((time.perf_counter() - start) * 1000)
        return self

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "checks_run": str(self.checks_run),
            "failures": [f.to_dict() for f in self.failures],
            "wall_ms": str(self.wall_ms),
        }

    def summary(self) -> str:
        line = f"{self.status.upper():8s} {self.id:28s} checks={self.checks_run}"
        if self.failures:
            first = self.failures[0]
            where = ", ".join(f"{k}={v}" for k, v in first.params.items())
            line += f" failures={len(self.failures)} first=({where}) index={format_number(first.index)}"
        if self.skipped:
            line += " skipped=" + ",".join(f"{k}:{v}" for k, v in sorted(self.skipped.items()))
        return line


def dump_document(tool_version: str, run_params: dict[str, Any], reports: list[VerificationReport]) -> str:
    """Serialise a run; entries sorted by id, every number a decimal string."""
    doc = {
        "tool_version": tool_version,
        "run_params": {k: _stringify(v) for k, v in run_params.items()},
        "entries": [r.to_dict() for r in sorted(reports, key=lambda r: r.id)],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_document(text: str) -> dict:
    return json.loads(text)


def _stringify(v: Any):
    if isinstance(v, (list, tuple)):
        return [_stringify(x) for x in v]
    if v is None:
        return ""
    return str(v)
