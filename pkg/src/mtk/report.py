"""Uniform check reports: every report carries the bounds it ran at."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckReport:
    name: str
    ok: bool
    problems: list
    bounds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok,
                "problems": list(self.problems), "bounds": dict(self.bounds)}

    def __str__(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def merge_reports(name: str, reports) -> CheckReport:
    reports = list(reports)
    problems = [p for r in reports for p in
                ("%s: %s" % (r.name, q) for q in r.problems)]
    bounds = {r.name: r.bounds for r in reports}
    return CheckReport(name, all(r.ok for r in reports), problems, bounds)
