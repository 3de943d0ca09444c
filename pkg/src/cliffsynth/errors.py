"""Exception types shared across the package."""


class CliffSynthError(Exception):
    """Base class for all package errors."""


class InvalidArgument(CliffSynthError, ValueError):
    pass


class NonCliffordGateError(CliffSynthError, ValueError):
    """Raised when a T/Tdg gate reaches tableau simulation."""


class CircuitSyntaxError(CliffSynthError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class DimacsError(CliffSynthError, ValueError):
    pass


class InternalConsistencyError(CliffSynthError, RuntimeError):
    """A solver model violates a structural constraint of the encoding."""


class DecodeVerificationError(CliffSynthError, RuntimeError):
    """A decoded circuit does not reproduce its target tableau."""


class SearchTimeout(CliffSynthError, RuntimeError):
    """No satisfiable depth was found within the budget."""
