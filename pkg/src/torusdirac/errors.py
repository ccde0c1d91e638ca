"""Exception types shared across the package."""


class TorusDiracError(Exception):
    """Base class for all package-specific errors."""


class DegenerateGeometry(TorusDiracError):
    """The ring radius R(x) vanishes (or nearly so) where it must not."""


class ChargeZero(TorusDiracError):
    """A gauge family needing a nonzero charge was built with e = 0."""


class GridMismatch(TorusDiracError):
    """Two grid functions (or an operator and its operand) live on different grids."""


class VelocityZero(TorusDiracError):
    """The Fermi velocity vanishes on an interior grid point where it is divided by."""


class FamilyMismatch(TorusDiracError):
    """An operation received a gauge/velocity family it is not defined for."""


class DomainSingularity(TorusDiracError):
    """The evaluation grid touches a pole of the integrand/potential."""


class DomainUnsupported(TorusDiracError):
    """Argument outside the convergence domain of a series evaluation."""


class PoleAtC(TorusDiracError):
    """Hypergeometric lower parameter hits a nonpositive integer in a non-terminating case."""


class SingularParameter(TorusDiracError):
    """A parameter combination makes a closed form singular."""


class NoRootInBracket(TorusDiracError):
    """Root scan found no sign change in the search interval."""


class NoSignChange(TorusDiracError):
    """Bracketed root finder was called with f(lo)·f(hi) > 0."""


class ComplexPotential(TorusDiracError):
    """A real symmetric eigensolve was requested for a complex potential."""


class ConvergenceFailure(TorusDiracError):
    """Iterative solver exceeded its iteration budget."""


class NotConfining(TorusDiracError):
    """Shooting window shows no bound state (no sign change in the matching function)."""


class EvenSampleCount(TorusDiracError):
    """Composite Simpson needs an odd number of samples."""


class UnknownParameter(TorusDiracError):
    """Sweep requested over a parameter name that is not sweepable."""


class ConfigError(TorusDiracError):
    """Scenario configuration failed validation; message carries the field path."""
