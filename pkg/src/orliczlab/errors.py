"""Exception types shared across the library."""


class OrliczLabError(Exception):
    """Base class for all library errors."""


class NonIntegrable(OrliczLabError):
    """The Boltzmann weight e^{-scale*V} has non-integrable tails."""


class QuadratureFailure(OrliczLabError):
    """Adaptive quadrature could not reach the requested tolerance."""


class DomainError(OrliczLabError):
    """Parameter outside the admissible range."""


class ConvexityViolation(OrliczLabError):
    """A function required to be convex failed the convexity probe."""


class Unbounded(OrliczLabError):
    """A gauge-norm bracket search did not terminate."""


class SingularAtZero(OrliczLabError):
    """An entropy integrand diverges near zero."""


class UnboundedSupremum(OrliczLabError):
    """A half-line weight diverges; the criterion constant is infinite."""


class SandwichViolation(OrliczLabError):
    """Internal consistency failure of a two-sided bound."""


class HypothesisViolation(OrliczLabError):
    """A theorem hypothesis failed its numerical probe."""


class StiffnessFailure(OrliczLabError):
    """ODE step control underflowed."""


class MissingRothausConstant(OrliczLabError):
    """Tightening in concave mode needs an empirical curvature constant."""


class NonpositiveCurvature(OrliczLabError):
    """Spectral-gap extraction got a non-positive curvature at 1."""


class StepTooCoarse(OrliczLabError):
    """The two Monte Carlo estimators disagree beyond 5 joint sigma."""


class NotLogConcave(OrliczLabError):
    """Exact profile formula requires a log-concave density."""


class Disconnected(OrliczLabError):
    """Finite-space operation requires a connected state graph."""


class ConfigError(OrliczLabError):
    """Malformed run configuration."""
