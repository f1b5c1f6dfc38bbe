"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(ValueError):
    """A scenario, preset or requirements file cannot be used as given."""


class InfeasibleRequirements(ValueError):
    """Tuning requirements admit no power-law controller with n > 1."""


class NumericError(ArithmeticError):
    """A linear-algebra step failed despite its preconditions holding."""


class NotFoundError(LookupError):
    """A requested feature (crossing, steady state) is absent from the data."""


class DivergenceError(RuntimeError):
    """The simulated state became non-finite."""

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"state became non-finite at step {step}")
