"""Exception hierarchy shared by the library and the command-line front end."""


class LLFError(Exception):
    """Base class for all errors raised by llfaccel."""

    exit_code = 3


class ValidationError(LLFError, ValueError):
    """Bad parameters or arguments."""

    exit_code = 2


class DimensionMismatchError(ValidationError):
    """Planes or pyramid levels whose dimensions do not line up."""


class DepthError(ValidationError):
    """Image too small for the requested pyramid depth."""

    def __init__(self, message, max_depth):
        super().__init__(message)
        self.max_depth = max_depth


class NoProgressError(ValidationError):
    """Simulator configuration that can never deliver a pixel."""


class ImageIOError(LLFError, OSError):
    """Unreadable, unwritable or malformed image file."""

    exit_code = 1


class GeometryError(LLFError, RuntimeError):
    """Internal sub-image bookkeeping failure; indicates a bug."""

    exit_code = 3
