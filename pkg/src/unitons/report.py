"""Structured pass/fail reports shared by the checkers."""

from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    passed: bool = True
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, **entry):
        self.passed = False
        self.failures.append(entry)

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {
            "check": self.name,
            "passed": self.passed,
            "failures": self.failures,
            **({"details": self.details} if self.details else {}),
        }
