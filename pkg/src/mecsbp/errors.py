"""Exception types shared across the package."""


class MecsbpError(Exception):
    """Base class for all package errors."""


class ConstraintViolation(MecsbpError, ValueError):
    """A model coefficient breaks one of the admissibility inequalities."""

    def __init__(self, constraint):
        super().__init__(constraint)
        self.constraint = constraint


class ParamsLoadError(MecsbpError, ValueError):
    """A parameter file is malformed or is missing a key."""


class DomainError(MecsbpError, ValueError):
    """An argument lies outside the domain of a function."""


class ConfigError(MecsbpError, ValueError):
    """A simulation or Monte Carlo configuration is inconsistent."""


class QuadratureFailure(MecsbpError, ArithmeticError):
    """Adaptive quadrature ran out of refinement budget."""


class PreconditionError(MecsbpError, ValueError):
    """Exponents or coefficients passed to an inequality check are malformed."""


class HypothesisError(MecsbpError, ValueError):
    """The hypotheses of a constant-finding lemma are not satisfied."""


class ConsistencyError(MecsbpError, AssertionError):
    """Internal logic produced a contradiction (a bug, never a user error)."""
