"""Exception types raised across the engine."""


class ShortServeError(Exception):
    """Base class for all engine errors."""


class ParseError(ShortServeError):
    """Recording could not be parsed; message names the offending line/record."""


class MarkerSetError(ShortServeError):
    """A required marker label is absent from the recording's label set."""


class GeometryError(ShortServeError):
    """Degenerate geometry (zero-length vector, coincident markers, ...)."""


class ParameterError(ShortServeError):
    """Caller supplied a non-physical or out-of-range parameter."""


class WindowError(ShortServeError):
    """Not enough frames around the requested timestamp."""


class SegmentationError(ShortServeError):
    """Keyframes are out of order or lie outside the sample range."""


class FitError(ShortServeError):
    """Too few samples survive to fit a model."""


class JudgeError(ShortServeError):
    """A summary is missing the values needed for judgment."""


class StatsError(ShortServeError):
    """Degenerate input to a statistical routine."""
