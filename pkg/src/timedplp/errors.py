"""Exception hierarchy shared by all engine components."""


class PlpError(Exception):
    """Base class for all user-facing engine errors."""


class ParseError(PlpError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


class EvalError(PlpError):
    """Ill-sorted builtin application, division by zero, and friends."""


class StratError(PlpError):
    """Program violates the time/predicate stratification discipline."""


class GroundError(PlpError):
    """Grounding failed (floundering, divergence, inconsistent facts)."""


class InferenceError(PlpError):
    """Variable elimination was handed something it cannot process."""


class QueryError(PlpError):
    """Malformed query or zero-probability evidence."""


class OracleError(PlpError):
    """Exhaustive-enumeration reference semantics refused to run."""
