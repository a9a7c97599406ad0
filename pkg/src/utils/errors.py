"""Exception hierarchy shared by the library and the command line front end."""

from __future__ import annotations


class BridgewalkError(Exception):
    """Base class for bridgewalk errors."""

    code: str = "error"
    exit_code: int = 1


class InvalidModelSpecError(BridgewalkError):
    """Raised when a walk specification cannot describe a valid symmetric walk."""

    code = "invalid_spec"
    exit_code = 2


class SymmetryViolationError(InvalidModelSpecError):
    """Raised when the step law gives g and g^-1 different probabilities."""

    code = "symmetry"

    def __init__(self, step: tuple[int, ...], p_step: float, p_inverse: float) -> None:
        super().__init__(
            f"step {step} has probability {p_step!r} but its inverse has {p_inverse!r}"
        )
        self.step = step
        self.p_step = p_step
        self.p_inverse = p_inverse


class InvalidVertexError(BridgewalkError):
    code = "invalid_vertex"
    exit_code = 2


class UnsupportedDistanceError(BridgewalkError):
    """Raised when no exact word metric is available for the model."""

    code = "unsupported_distance"
    exit_code = 2


class UnsupportedModelError(BridgewalkError):
    code = "unsupported_model"
    exit_code = 2


class BudgetExceededError(BridgewalkError):
    """Raised when a computation would exceed its configured memory/time budget."""

    code = "budget"
    exit_code = 3

    def __init__(self, budget_name: str, limit: int, requested: int) -> None:
        super().__init__(f"{budget_name}: requested {requested} exceeds limit {limit}")
        self.budget_name = budget_name
        self.limit = limit
        self.requested = requested


class PeriodError(BridgewalkError):
    """Raised when a bridge length is not a multiple of the walk's period."""

    code = "period"
    exit_code = 3

    def __init__(self, n: int, period: int) -> None:
        super().__init__(f"n={n} is not a multiple of the period p={period}; no bridge exists")
        self.n = n
        self.period = period


class UnreachableStateError(BridgewalkError):
    code = "unreachable"
    exit_code = 4


class NumericalInstabilityError(BridgewalkError):
    code = "numerical"
    exit_code = 4


class DivergenceError(BridgewalkError):
    """Raised when a generating function is evaluated beyond its radius of convergence."""

    code = "divergence"
    exit_code = 4


class AcceptanceStarvationError(BridgewalkError):
    code = "starvation"
    exit_code = 4

    def __init__(self, attempts: int, n: int) -> None:
        super().__init__(
            f"no lamplighter bridge accepted after {attempts} attempts at n={n}; "
            "use mode='importance' (weights 2^-N_n, self-normalized)"
        )
        self.attempts = attempts
        self.n = n


class ConfigError(BridgewalkError):
    """Raised for unreadable or invalid experiment configuration."""

    code = "config"
    exit_code = 2

    def __init__(self, message: str, line: int | None = None, field: str | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field


class UsageError(BridgewalkError):
    code = "usage"
    exit_code = 2


class OutputError(BridgewalkError):
    """Raised when an artifact cannot be written."""

    code = "io"
    exit_code = 1
