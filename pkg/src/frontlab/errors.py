"""Exception hierarchy shared across the package."""


class FrontlabError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FrontlabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InputError(FrontlabError, ValueError):
    """Structurally invalid input: empty grid, too few samples, bad shapes."""


class ParameterError(FrontlabError, ValueError):
    """A model parameter violates its admissibility constraints."""


class EnvelopeDomainError(DomainError):
    """The growth-ODE envelope was evaluated left of its saturation edge.

    Carries the edge position x0(t) so callers can clip their query range.
    """

    def __init__(self, message: str, edge: float | None = None):
        super().__init__(message)
        self.edge = edge


class BelowLevelError(FrontlabError, ValueError):
    """No grid value reaches the requested level (the level set is empty)."""


class FrontExitedDomainError(FrontlabError, ValueError):
    """The rightmost grid value still exceeds the level: the front left the domain."""


class OffsetError(FrontlabError, ValueError):
    """A fit offset makes the transformed ordinate undefined (x - b <= 0)."""


class AnalysisError(FrontlabError, RuntimeError):
    """No candidate rate model could be fitted to a trace."""


class CalibrationError(FrontlabError, RuntimeError):
    """The doubling calibration did not reach a valid barrier within its cap."""


class NumericalError(FrontlabError, ArithmeticError):
    """Defensive report of a numerically impossible event (e.g. zero pivot)."""


class SolverError(FrontlabError, RuntimeError):
    """The time integration failed.  Carries the simulation time of the event."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class ConfigError(FrontlabError, ValueError):
    """A configuration file could not be parsed or validated.

    ``line`` is the 1-based line number when known, ``key`` the offending key.
    """

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        super().__init__(message)
        self.line = line
        self.key = key
