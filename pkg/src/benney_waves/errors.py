"""Exception hierarchy shared by the library and the command line."""


class WavesError(Exception):
    """Base class for all errors raised by :mod:`benney_waves`."""

    exit_code = 1


class ConfigurationError(WavesError, ValueError):
    """Inputs are inconsistent (grids, flags, file contents)."""

    exit_code = 2


class DomainError(WavesError, ValueError):
    """Parameters fall outside the window where the construction exists."""

    exit_code = 2


class NumericalFailure(WavesError, RuntimeError):
    """A computation produced non-finite values or could not proceed."""

    exit_code = 4
