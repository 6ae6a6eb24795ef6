"""Exception hierarchy shared by all thermofocus modules."""


class ThermofocusError(Exception):
    """Base class for every error raised by this package."""


class FrameSizeError(ThermofocusError, ValueError):
    """Frame dimensions disagree with the data or are too small for an operation."""


class PixelRangeError(ThermofocusError, ValueError):
    """A pixel value lies outside the 16-bit range [0, 65535]."""


class BoundsError(ThermofocusError, IndexError):
    """A pixel coordinate is outside the region where an operator is defined."""


class StackError(ThermofocusError, ValueError):
    """A focus stack or curve violates its ordering/shape invariants."""


class EmptyCurveError(ThermofocusError, ValueError):
    pass


class DomainError(ThermofocusError, ValueError):
    """A physical argument is outside the domain of a formula."""


class NoRealImageError(DomainError):
    pass


class FormatError(ThermofocusError, ValueError):
    """An on-disk file is malformed."""
