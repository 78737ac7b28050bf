"""Exception types and validation reports shared across the engine.

Operations that have a declared error condition raise one of the exception
classes below.  Validators never raise for the defects they are asked to
find; they return a :class:`Report` listing every violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class EngineError(Exception):
    """Base class for every error raised by this package."""


class UnknownLabelError(EngineError):
    """A label was used that is not an element of the lattice at hand."""


class LatticeError(EngineError):
    """Ill-formed lattice, or two objects live over different lattices."""


class GraphError(EngineError):
    """Structurally unusable graph input."""


class MorphismError(EngineError):
    """Domain mismatch, missing injectivity, or typing mismatch."""


class SquareError(EngineError):
    """A span/cospan or candidate square is unusable."""


class NonCommutingSquareError(SquareError):
    """The four morphisms do not commute; distinct from a negative answer."""


class RuleError(EngineError):
    """Invalid rewrite rule or ill-formed rule right-hand-side spec."""


class StrongMatchError(EngineError):
    """The supplied match does not establish a strong match for the rule."""


class InternalMediatorError(EngineError):
    """The interface embedding of a step could not be completed.

    Signals a bug or an invalid rule: for valid inputs the unique morphism
    from the rule interface into the step interface always exists.
    """


class BddError(EngineError):
    """Invalid BDD, unknown variable, or too many variables."""


class ParseError(EngineError):
    """Malformed interchange text; carries location/field diagnostics."""


class DanglingReferenceError(ParseError):
    """A workspace record refers to a name that is not defined."""


@dataclass(frozen=True)
class Violation:
    """One named defect found by a validator."""

    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


@dataclass
class Report:
    """Accumulated validator output.  Empty means the object is valid."""

    violations: list[Violation] = field(default_factory=list)

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def extend(self, other: "Report", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(Violation(v.code, prefix + v.message))

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)
