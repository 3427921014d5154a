"""Exception hierarchy.

Every error raised by this package derives from :class:`TreelapError`, so
callers (notably the CLI) can map any library failure to a diagnostic exit.
Where a builtin category fits, the class also inherits from it.
"""


class TreelapError(Exception):
    """Base class for all treelap errors."""


class DomainError(TreelapError, ValueError):
    """A parameter lies outside its mathematical domain."""


class BoundsError(TreelapError, IndexError):
    """A node index or level is outside the truncated tree."""


class ConfigurationError(TreelapError, ValueError):
    """An inadmissible configuration, e.g. a (beta, depth) pair whose
    level-weight table overflows double precision."""


class BracketError(TreelapError, RuntimeError):
    """Eigenvalue bisection could not establish a sign-change bracket.

    This is the "no eigenvalue found" diagnostic, expected for weight
    parameters outside the subcritical range.
    """


class SpectralWindowError(TreelapError, RuntimeError):
    """A resolvent solve was requested at or above the principal
    eigenvalue of the truncated operator."""


class IterationLimitError(TreelapError, RuntimeError):
    """Fixed-point iteration did not converge within its budget."""

    def __init__(self, message: str, last_residual: float):
        super().__init__(message)
        self.last_residual = last_residual


class TrajectoryRangeError(TreelapError, ValueError):
    """A time outside the stored trajectory range was requested."""


class WindowError(TreelapError, ValueError):
    """A fit window contains too few trajectory samples."""


class GridMismatchError(TreelapError, ValueError):
    """Two trajectories do not share the same tree and time grid."""


class FileFormatError(TreelapError, ValueError):
    """A CSV/JSON input file does not match the documented schema."""
