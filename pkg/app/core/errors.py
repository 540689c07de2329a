"""
Exception hierarchy for the strata calculators.

Each error also derives from the builtin a caller would naturally catch
(ValueError for bad arguments, IndexError for truncation reads, ...), so the
routes can keep catching (TypeError, ValueError) the way they always have.
"""


class StrataError(Exception):
    """Base class for every error raised by app.core."""


class StrataArgumentError(StrataError, ValueError):
    """A precondition on the arguments of an operation failed."""


class TruncationError(StrataError, IndexError):
    """A coefficient above the truncation order of a series was read."""

    def __init__(self, degree: int, trunc: int):
        super().__init__(
            f"coefficient of t^{degree} requested but series is truncated at t^{trunc}"
        )
        self.degree = degree
        self.trunc = trunc


class NegativeDimensionError(StrataError, ArithmeticError):
    """A subtraction of dimension series produced a negative coefficient."""

    def __init__(self, degree: int, value: int, message: str | None = None):
        super().__init__(
            message or f"negative dimension {value} at degree {degree}"
        )
        self.degree = degree
        self.value = value


class InjectivityViolation(NegativeDimensionError):
    """A cokernel computed under an injectivity assertion went negative."""

    def __init__(self, degree: int, value: int):
        super().__init__(
            degree,
            value,
            f"injectivity violated: cokernel dimension {value} at degree {degree}",
        )


class UnsupportedInputError(StrataError, ValueError):
    """The request is well formed but outside what the engine can compute."""


class RuleContradiction(StrataError, ArithmeticError):
    """Differential rules force a negative dimension somewhere in a window."""


class BudgetExceededError(StrataError, ValueError):
    """A brute-force enumeration would exceed the configured state cap."""

    def __init__(self, states: int, cap: int):
        super().__init__(
            f"enumeration needs {states} states, above the cap of {cap} "
            f"(raise STRATA_BRUTE_STATE_CAP or shrink d, n, p)"
        )
        self.states = states
        self.cap = cap


class InternalConsistencyError(StrataError, RuntimeError):
    """A self-check inside an oracle failed; signals a bookkeeping bug."""
