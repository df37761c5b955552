"""Exception types shared across the toolkit.

Everything numerical derives from NumericsError so the CLI can map any
computation failure to a single exit code; RunSpecError is reserved for
malformed run specifications.
"""


class NumericsError(Exception):
    """A numerical routine could not meet its contract."""


class CurveError(NumericsError):
    pass


class ArcError(NumericsError):
    pass


class MapError(NumericsError):
    """Conformal map construction failed; carries the last iteration residual."""

    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (last residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class MapInvertError(MapError):
    pass


class DomainError(NumericsError):
    pass


class PoleError(NumericsError):
    pass


class QuadratureError(NumericsError):
    pass


class ExtremalError(NumericsError):
    pass


class RunSpecError(Exception):
    """A run spec failed validation. `path` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message
