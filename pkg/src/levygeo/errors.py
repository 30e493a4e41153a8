"""Exception hierarchy shared by all levygeo modules."""


class LevyGeoError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(LevyGeoError, ValueError):
    pass


class ParamOutOfRange(LevyGeoError, ValueError):
    pass


class NonzeroAtOrigin(LevyGeoError, ValueError):
    pass


class NegativeArgument(LevyGeoError, ValueError):
    pass


class NonpositiveArgument(LevyGeoError, ValueError):
    pass


class OutOfRange(LevyGeoError, ValueError):
    pass


class RadiusTooLarge(LevyGeoError, ValueError):
    """The requested metric ball is unbounded in the Euclidean sense."""


class NotMetricGenerating(LevyGeoError, ValueError):
    pass


class NonIntegrable(LevyGeoError, ValueError):
    """exp(-t psi) is not (numerically) integrable."""


class WindowTooSmall(LevyGeoError, ValueError):
    def __init__(self, message, suggested_h=None):
        super().__init__(message)
        self.suggested_h = suggested_h


class UnsupportedT(LevyGeoError, ValueError):
    pass


class NonpositiveDensity(LevyGeoError, ValueError):
    pass


class DomainExceeded(LevyGeoError, ValueError):
    pass


class DomainError(LevyGeoError, ValueError):
    pass


class InsufficientRange(LevyGeoError, ValueError):
    pass


class QuadratureFailure(LevyGeoError, RuntimeError):
    pass


class EvaluationFailure(LevyGeoError, RuntimeError):
    pass


class ConfigError(LevyGeoError, ValueError):
    """Invalid model JSON or CLI configuration.

    ``field`` names the offending key (dotted path) when known.
    """

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class EmptyData(LevyGeoError, ValueError):
    """Nothing to emit; no file is written."""
