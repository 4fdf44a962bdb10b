#!/usr/bin/env python3

# Copyright (C) 2025 Dustin Darcy <ScarcityHypothesis.org>
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program. If not, see <https://www.gnu.org/licenses/>.


"""
reports.py

Check rows and aggregated reports shared by the verification sweeps.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional


@dataclass
class CheckRow:
    """One checked claim on one instance."""
    check: str
    passed: bool
    instance: str = ""
    lhs: Any = None
    rhs: Any = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "instance": self.instance,
            "lhs": "" if self.lhs is None else str(self.lhs),
            "rhs": "" if self.rhs is None else str(self.rhs),
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class CheckReport:
    """Container for the rows of a sweep plus free-form summary values."""
    name: str
    rows: List[CheckRow] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    timestamp: float = field(default_factory=time.time)

    def add(self, check: str, passed: bool, instance: str = "", lhs: Any = None, rhs: Any = None,
            detail: str = "") -> CheckRow:
        row = CheckRow(check, bool(passed), instance, lhs, rhs, detail)
        self.rows.append(row)
        return row

    def extend(self, rows: Iterable[CheckRow]) -> None:
        self.rows.extend(rows)

    def merge(self, other: "CheckReport", prefix: Optional[str] = None) -> None:
        for row in other.rows:
            if prefix:
                row = CheckRow(row.check, row.passed, f"{prefix}:{row.instance}" if row.instance else prefix,
                               row.lhs, row.rhs, row.detail)
            self.rows.append(row)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> List[CheckRow]:
        return [row for row in self.rows if not row.passed]

    def counts(self) -> Dict[str, int]:
        """Number of rows per check name."""
        result: Dict[str, int] = {}
        for row in self.rows:
            result[row.check] = result.get(row.check, 0) + 1
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "rows": len(self.rows),
            "failures": [row.to_dict() for row in self.failures],
            "summary": self.summary,
            "time": time.ctime(self.timestamp),
        }

    def __str__(self) -> str:
        status = "PASSED" if self.passed else "FAILED"
        return f"{self.name}: {status} ({len(self.rows)} checks, {len(self.failures)} failures)"

    def tally(self, instance: str = "") -> "Tally":
        return Tally(self, instance)


class Tally:
    """
    Counts repeated checks on one instance.

    Only failures become rows while checking; close() adds one summary row per check.
    """

    def __init__(self, report: CheckReport, instance: str = ""):
        self.report = report
        self.instance = instance
        self.counts: Dict[str, int] = {}
        self.failed: Dict[str, int] = {}

    def check(self, name: str, passed: bool, lhs: Any = None, rhs: Any = None, detail: str = "") -> bool:
        self.counts[name] = self.counts.get(name, 0) + 1
        if not passed:
            self.failed[name] = self.failed.get(name, 0) + 1
            self.report.add(name, False, self.instance, lhs, rhs, detail)
        return bool(passed)

    def close(self) -> CheckReport:
        for name, count in self.counts.items():
            failed = self.failed.get(name, 0)
            self.report.add(name, failed == 0, self.instance, None, None,
                            f"{count} checks" if not failed else f"{failed} of {count} checks failed")
        return self.report
