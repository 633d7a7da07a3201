"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: ConfigError means a bad
configuration or usage (exit 2), DataError and its subclasses mean a
runtime or data problem (exit 1).
"""


class ZifsimError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ZifsimError):
    """Invalid or missing configuration (bad key, bad value, missing entry)."""


class DataError(ZifsimError):
    """Invalid input data at runtime (bad capture file, bad schedule, ...)."""


class MalformedFrameError(DataError):
    """A bit sequence that cannot be decoded into a register-write frame."""


class ScheduleError(DataError):
    """A command schedule that violates ordering or nesting rules."""


class OverlappingSpiError(ScheduleError):
    """A register write was issued before the previous frame finished."""


class MeasurementError(DataError):
    """A power trace without a detectable turnaround step."""


class FilterRefusedError(DataError):
    """Packet filtering would remove too much of the series to be trusted."""
