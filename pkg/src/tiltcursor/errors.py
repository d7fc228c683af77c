"""Exception types shared across the pipeline."""


class TraceFormatError(ValueError):
    """Raised when a sensor trace file cannot be decoded."""


class CalibrationError(ValueError):
    """Raised when a calibration window is unusable.

    For direct-mapping calibration, ``missing`` names the head extremes
    that were never reached during the sweep.
    """

    def __init__(self, message: str, missing: tuple[str, ...] = ()):
        super().__init__(message)
        self.missing = missing


class DegenerateThresholdError(ValueError):
    """Raised when a mapping denominator collapses to zero."""


class ReportRangeError(ValueError):
    """Raised when a value does not fit a HID boot mouse report."""
