"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: config errors -> 2, numeric/domain
errors -> 3 (assertion failures are reported, not raised).
"""


class OmqmError(Exception):
    """Base class for all package errors."""


class DomainError(OmqmError, ValueError):
    """An input violates a documented precondition (sign, range, ordering)."""


class OrderingError(DomainError):
    """Gate or time ordering violated (tau2 <= tau1)."""


class CausticError(OmqmError, ValueError):
    """Propagator evaluated at or too close to a caustic (sin(w*dt) ~ 0)."""


class GridError(OmqmError, ValueError):
    """A path or grid is malformed (non-uniform, too short, non-increasing)."""


class StepSizeError(OmqmError, ValueError):
    """Integrator step size violates the stability/accuracy guard."""


class NumericError(OmqmError, ArithmeticError):
    """A computation produced non-finite values or a solver failed."""


class CoverageError(OmqmError, ValueError):
    """Quadrature grid too narrow: probability mass leaks past the edges."""


class NormalizationError(OmqmError, ValueError):
    """A density handed in (or produced) is not normalized within tolerance."""


class ConfigError(OmqmError, ValueError):
    """Invalid experiment configuration (unknown key, bad value, bad combo)."""
