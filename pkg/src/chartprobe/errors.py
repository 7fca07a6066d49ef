"""Exception types shared across the toolkit.

Tool-level errors deliberately subclass a common base so the agent loop can
record any of them as a failed observation instead of crashing the run.
"""

from __future__ import annotations


class ChartProbeError(Exception):
    """Base class for every error raised by this package."""


# --- data / serialization -------------------------------------------------

class MalformedRecord(ChartProbeError):
    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        super().__init__(f"malformed record at line {line_no}" + (f": {detail}" if detail else ""))


class MissingField(ChartProbeError):
    def __init__(self, name: str, line_no: int | None = None):
        self.name = name
        self.line_no = line_no
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"missing field '{name}'{where}")


class InvalidSpec(ChartProbeError):
    pass


# --- raster / perception tools ---------------------------------------------

class ToolError(ChartProbeError):
    """Any failure inside a perception or numeric tool."""


class OutOfBounds(ToolError):
    pass


class EmptyRegion(ToolError):
    pass


class ProviderFailure(ToolError):
    pass


class RecognizerUnavailable(ToolError):
    pass


class LegendNotFound(ToolError):
    pass


class EntryNotFound(ToolError):
    pass


class NoTicksFound(ToolError):
    pass


class NonMonotonic(ToolError):
    pass


class DivisionByZero(ToolError):
    pass


class UnsupportedOp(ToolError):
    pass


class UnknownSegmentLabel(ToolError):
    pass


class BarNotFound(ToolError):
    pass


class TickerNotFound(ToolError):
    pass


class NegativeExtent(ToolError):
    """Bar top landed on the wrong side of the baseline; a fallback trigger."""


class NoSegmentsMatch(ToolError):
    pass


class MedianUndetectable(ToolError):
    pass


class NoEdgeFound(ToolError):
    pass


class SegmentNotFound(ToolError):
    pass


class OuterCircleNotFound(ToolError):
    pass


class InvalidRadius(ToolError):
    pass


# --- agent loop -------------------------------------------------------------

class MetadataParseError(ChartProbeError):
    def __init__(self, detail: str, raw_reply: str = ""):
        self.raw_reply = raw_reply
        super().__init__(detail)


class ReasonerFailure(ChartProbeError):
    pass


class UnsupportedFamily(ChartProbeError):
    pass


class SchemaViolation(ToolError):
    """An agent action that does not validate against the tool registry."""


# --- sidecar client ----------------------------------------------------------

class SidecarError(ChartProbeError):
    pass


class Unreachable(SidecarError):
    pass


class ProtocolError(SidecarError):
    pass


class Timeout(SidecarError):
    pass


class EmptyInput(ChartProbeError):
    pass
