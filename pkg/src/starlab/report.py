"""Verification reports and their JSON / CSV / Markdown renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from .errors import ConfigError

SCHEMA_VERSION = "starlab.report/1"

PASS = "pass"
FAIL = "fail"
PAPER_DISCREPANCY = "paper_discrepancy"
STATUSES = (PASS, FAIL, PAPER_DISCREPANCY)
FORMATS = ("json", "csv", "md")


@dataclass
class ReportEntry:
    relation_id: str
    max_abs_error: float
    tolerance: float
    status: str
    notes: str = ""
    section: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        ok = self.max_abs_error <= self.tolerance
        if ok != (self.status == PASS):
            raise ValueError(
                f"{self.relation_id}: status {self.status} inconsistent with error "
                f"{self.max_abs_error:.3e} vs tolerance {self.tolerance:.1e}"
            )

    @property
    def passed(self):
        return self.status == PASS

    def to_dict(self):
        d = asdict(self)
        d["max_abs_error"] = _num(self.max_abs_error)
        d["tolerance"] = _num(self.tolerance)
        return d


def _num(x):
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def _fmt_err(x):
    return f"{x:.3e}" if math.isfinite(x) else str(_num(x))


@dataclass
class VerificationReport:
    suite: str
    entries: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    def check(self, relation_id, error, tolerance, notes="", on_fail=FAIL):
        """Record a measured error.  Passes iff ``error <= tolerance``;
        otherwise the entry gets ``on_fail`` (``fail`` or ``paper_discrepancy``)."""
        error = float(error)
        if math.isnan(error):
            error = math.inf
        status = PASS if error <= tolerance else on_fail
        entry = ReportEntry(relation_id, error, float(tolerance), status, notes, self.suite)
        self.entries.append(entry)
        return entry

    def discrepancy(self, relation_id, error, tolerance, notes=""):
        """A printed relation compared against the oracle."""
        return self.check(relation_id, error, tolerance, notes, on_fail=PAPER_DISCREPANCY)

    def fail(self, relation_id, notes):
        return self.check(relation_id, math.inf, 0.0, notes)

    def extend(self, other):
        for e in other.entries:
            if not e.section:
                e.section = other.suite
            self.entries.append(e)
        for k, v in other.environment.items():
            self.environment.setdefault(k, v)
        return self

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, relation_id):
        for e in self.entries:
            if e.relation_id == relation_id:
                return e
        raise KeyError(relation_id)

    def find(self, prefix):
        return [e for e in self.entries if e.relation_id.startswith(prefix)]

    @property
    def passed(self):
        """True when no entry has status ``fail``."""
        return all(e.status != FAIL for e in self.entries)

    @property
    def max_error(self):
        return max((e.max_abs_error for e in self.entries), default=0.0)

    def counts(self):
        out = {s: 0 for s in STATUSES}
        for e in self.entries:
            out[e.status] += 1
        return out

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "environment": self.environment,
            "summary": self.counts(),
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        cols = ["section", "relation_id", "max_abs_error", "tolerance", "status", "notes"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for e in self.entries:
            d = e.to_dict()
            d["section"] = e.section or self.suite
            w.writerow({c: d[c] for c in cols})
        return buf.getvalue()

    def to_markdown(self):
        sections = {}
        for e in self.entries:
            sections.setdefault(e.section or self.suite, []).append(e)
        lines = []
        for name, rows in sections.items():
            lines.append(f"## {name}")
            lines.append("")
            lines.append("| relation | max abs error | tolerance | status | notes |")
            lines.append("|---|---|---|---|---|")
            for e in rows:
                notes = e.notes.replace("|", "\\|")
                lines.append(
                    f"| {e.relation_id} | {_fmt_err(e.max_abs_error)} | {e.tolerance:.1e} | {e.status} | {notes} |"
                )
            lines.append("")
        return "\n".join(lines)

    def render(self, fmt="json"):
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "md":
            return self.to_markdown()
        raise ConfigError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")

    @classmethod
    def from_dict(cls, data):
        rep = cls(data["suite"], environment=data.get("environment", {}))
        for d in data["entries"]:
            d = dict(d)
            for key in ("max_abs_error", "tolerance"):
                d[key] = float(d[key])
            rep.entries.append(ReportEntry(**d))
        return rep
