"""Exception family shared across the package."""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WorkbenchError):
    """Malformed text input: machine expressions, problem files, configs."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None and column is not None:
            message = f"{line}:{column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class EvaluationError(WorkbenchError):
    """Evaluating a machine tree failed (depth bound exceeded, malformed tree)."""


class NormalizationError(EvaluationError):
    """A machine cannot be reshaped into a perfect binary tree of the requested depth."""


class ConstructionAuditError(EvaluationError):
    """An audited machine construction disagrees with its independent count oracle."""


class CapacityError(WorkbenchError):
    """An instance exceeds the configured enumeration caps."""


class ParameterError(WorkbenchError, ValueError):
    """An argument value is outside an operation's domain."""
