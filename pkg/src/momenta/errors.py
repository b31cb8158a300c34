"""Exception hierarchy.

Every class carries a short ``code`` used by reports so that failures are
identifiable without stack traces.
"""

from __future__ import annotations


class MomentaError(Exception):
    code = "E000"


class DimensionMismatch(MomentaError):
    code = "E001"


class ChartMismatch(MomentaError):
    code = "E002"


class DegreeError(MomentaError):
    code = "E003"


class DegreeCapExceeded(MomentaError):
    code = "E004"


class PolySyntaxError(MomentaError):
    code = "E005"

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(MomentaError):
    code = "E006"

    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown variable {name!r}{where}")


class InvalidBialgebra(MomentaError):
    code = "E007"


class NonInvertibleFrame(MomentaError):
    code = "E008"


class NoSolutionAtDegree(MomentaError):
    code = "E009"

    def __init__(self, degree: int, detail: str = ""):
        self.degree = degree
        msg = f"no multiplicative bivector with polynomial degree <= {degree}"
        super().__init__(msg + (f": {detail}" if detail else ""))


class FrameSingular(MomentaError):
    code = "E010"


class OutOfDomain(MomentaError):
    code = "E011"


class NotClosed(MomentaError):
    code = "E012"


class NotAbelian(MomentaError):
    code = "E013"


class NotConstant(MomentaError):
    code = "E014"

    def __init__(self, message: str, poly=None):
        self.poly = poly
        super().__init__(message)


class ScenarioParseError(MomentaError):
    code = "E015"

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 others: list | None = None):
        self.line = line
        self.column = column
        self.others = list(others or [])  # further diagnostics from the same file
        loc = "" if line is None else f" (line {line}, column {column})"
        extra = "".join(f"; {o}" for o in self.others)
        super().__init__(message + loc + extra)


class ConsistencyError(MomentaError):
    code = "E016"

    def __init__(self, errors: list[tuple[str, str, str]]):
        # (section, key, message) triples
        self.errors = list(errors)
        lines = [f"[{s}] {k}: {m}" for s, k, m in self.errors]
        super().__init__("; ".join(lines))


class MissingSection(MomentaError):
    code = "E017"


class ReportIoError(MomentaError):
    code = "E018"


class NotPoisson(MomentaError):
    code = "E019"


# Warnings


class AmbiguousSolution(UserWarning):
    """The linear system for a multiplicative bivector has a nontrivial kernel."""


class TruncationWarning(UserWarning):
    """A gauge series was truncated before it terminated."""


class OutsideBoxWarning(UserWarning):
    """Evaluation point lies outside the chart box."""
