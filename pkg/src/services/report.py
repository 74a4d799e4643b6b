"""
Pass/fail records shared by the canonical-basis checks and the verification suites.
"""

from dataclasses import dataclass, field
from typing import List


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, suite: str, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(CheckResult(suite, name, bool(passed), detail))
        return bool(passed)

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def names(self, suite: str = None) -> List[str]:
        return [check.name for check in self.checks if suite is None or check.suite == suite]
