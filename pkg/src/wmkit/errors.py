"""Exception types raised across the toolkit."""


class WatermarkError(Exception):
    """Base class for every error the toolkit raises on bad data."""


class UnsupportedFormat(WatermarkError):
    pass


class MalformedFile(WatermarkError):
    pass


class IoFailure(WatermarkError):
    pass


class EmptyInput(WatermarkError, ValueError):
    pass


class DimensionMismatch(WatermarkError, ValueError):
    pass


class LengthMismatch(WatermarkError, ValueError):
    pass


class ZeroReference(WatermarkError, ValueError):
    pass


class BadBlockSize(WatermarkError, ValueError):
    pass


class MalformedStream(WatermarkError):
    pass


class WatermarkTooLong(WatermarkError, ValueError):
    pass


class KeyMismatch(WatermarkError):
    pass
