"""Exception types shared across the package."""


class EgalJudgeError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(EgalJudgeError, ValueError):
    """Judgments of incompatible lengths were combined."""


class ValidationError(EgalJudgeError, ValueError):
    """An object violates one of its structural invariants."""


class FormulaSyntaxError(EgalJudgeError, ValueError):
    """Constraint text could not be parsed.

    Carries the 0-based character position of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(EgalJudgeError, ValueError):
    """A formula mentions a label the agenda does not declare."""


class InconsistentConstraintError(EgalJudgeError, ValueError):
    """A constraint admits no judgment at all."""


class CapacityError(EgalJudgeError, ValueError):
    """An enumeration would exceed the configured cap."""


class BudgetExceededError(EgalJudgeError, ValueError):
    """An exhaustive scan would exceed its work budget."""


class MissingTableEntryError(EgalJudgeError, KeyError):
    """A table rule was queried on a profile it does not cover."""


class InstanceError(EgalJudgeError, ValueError):
    """An instance file is malformed or self-inconsistent."""


class SolverOutputError(EgalJudgeError, ValueError):
    """External solver output could not be interpreted."""
