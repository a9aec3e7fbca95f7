"""Pass/fail reports returned by the structure checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Failure:
    law: str
    witness: object = None

    def __str__(self) -> str:
        if self.witness is None:
            return self.law
        return f"{self.law}: {self.witness}"


@dataclass(frozen=True)
class Report:
    """An ordered list of violated laws; empty means all checks passed."""

    failures: tuple[Failure, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def first(self) -> Failure | None:
        return self.failures[0] if self.failures else None

    def summary(self) -> str:
        if self.passed:
            return "pass"
        return "; ".join(str(f) for f in self.failures)


class ReportBuilder:
    """Collects failures while a checker walks its laws in order."""

    def __init__(self) -> None:
        self._failures: list[Failure] = []

    def fail(self, law: str, witness: object = None) -> None:
        self._failures.append(Failure(law, witness))

    def require(self, condition: bool, law: str, witness: object = None) -> bool:
        if not condition:
            self.fail(law, witness)
        return condition

    def merge(self, other: Report, prefix: str = "") -> None:
        for f in other.failures:
            law = f"{prefix}{f.law}" if prefix else f.law
            self._failures.append(Failure(law, f.witness))

    def report(self) -> Report:
        return Report(tuple(self._failures))
