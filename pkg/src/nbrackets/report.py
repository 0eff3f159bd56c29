"""Verification verdicts with explicit witnesses.

Every axiom checker produces a VerificationReport made of CheckItems, one
per verified identity.  A failing item always carries a witness: the input
tuple it failed on and the nonzero left-minus-right defect, rendered as
strings so reports stay readable and serializable.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    inputs: tuple[str, ...]
    defect: str


@dataclass(frozen=True)
class CheckItem:
    axiom: str
    description: str
    passed: bool
    checked: int
    witness: Witness | None = None
    scope: str = ""

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failing check {self.axiom!r} must carry a witness")


@dataclass(frozen=True)
class VerificationReport:
    items: tuple[CheckItem, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def checked(self) -> int:
        return sum(item.checked for item in self.items)

    @property
    def witness(self) -> Witness | None:
        for item in self.items:
            if not item.passed:
                return item.witness
        return None

    def item(self, axiom: str) -> CheckItem:
        for it in self.items:
            if it.axiom == axiom:
                return it
        raise KeyError(axiom)

    def merged(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(self.items + other.items)

    def summary(self) -> str:
        if not self.items:
            return "computation completed (no axioms to check)"
        lines = []
        for it in self.items:
            status = "PASS" if it.passed else "FAIL"
            line = f"{status} {it.axiom} ({it.checked} tuples checked)"
            if it.scope:
                line += f" [{it.scope}]"
            if it.witness is not None:
                line += f"\n  witness: {', '.join(it.witness.inputs)}\n  defect:  {it.witness.defect}"
            lines.append(line)
        return "\n".join(lines)


class VerificationError(RuntimeError):
    """Raised when an operation's verified preconditions fail.

    Carries the offending report so callers can surface the witness.
    """

    def __init__(self, message: str, report: VerificationReport):
        super().__init__(message)
        self.report = report
