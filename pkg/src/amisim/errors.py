"""Exception types shared across the simulator modules."""


class AmiSimError(Exception):
    """Base class for all amisim errors."""


# --- event kernel ---

class PastEvent(AmiSimError):
    """Event scheduled before the current simulation clock."""


class NoRoute(AmiSimError):
    """No link exists between the given nodes."""


class InvalidDirection(NoRoute):
    """Message kind is not allowed to flow between these node roles."""


# --- feeder model ---

class EmptyFeeder(AmiSimError):
    """Feeder configured with no houses."""


class InvalidDimension(AmiSimError):
    """Non-positive feeder dimension, voltage or resistance."""


class DimensionMismatch(AmiSimError):
    """Load vector length does not match the feeder house count."""


class Extrapolation(AmiSimError):
    """Requested distance lies outside the fitted span."""


class InsufficientData(AmiSimError):
    """Fewer than three distinct distances; quadratic fit undefined."""


# --- metering ---

class NonMonotonicTime(AmiSimError):
    """Meter read requested at or before its last sample time."""


# --- aggregator ---

class ForeignMeter(AmiSimError):
    """Reading from a meter outside this Aggregator's group."""


class UnknownMeter(AmiSimError):
    """Serial not served by this Aggregator."""


class NoData(AmiSimError):
    """No readings available for the requested serial or window."""


# --- head-end ---

class UnknownAggregator(AmiSimError):
    """No route to the named Aggregator."""


class EmptyHistory(AmiSimError):
    """Forecast requested with no state history."""


# --- privacy metrics ---

class DegradedReport(AmiSimError):
    """Ambiguity analysis requires a report with a valid fit."""


class ZeroTrials(AmiSimError):
    """Ambiguity analysis needs at least one trial."""


class EmptyWindow(AmiSimError):
    """Reduction statistics need at least one reading and one report."""


class MalformedRecord(AmiSimError):
    """Serialized record does not follow the documented format."""


# --- scenario config ---

class ParseError(AmiSimError):
    """Scenario text could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(AmiSimError):
    """Parsed scenario violates an invariant."""
