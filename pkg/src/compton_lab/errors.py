"""Exception hierarchy shared by all modules."""


class ComptonLabError(Exception):
    """Base class for every error raised by compton_lab."""


class DomainError(ComptonLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoSolutionError(ComptonLabError):
    """A root or contour point does not exist for the requested input."""


class UnsupportedConfigurationError(ComptonLabError, ValueError):
    """The closed form does not cover the requested configuration."""


class ToleranceError(ComptonLabError):
    """A computed quantity violates a numerical post-condition."""
