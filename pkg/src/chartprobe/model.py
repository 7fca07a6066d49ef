"""Shared domain types: pixel-space primitives, chart metadata, trajectories.

Everything here is immutable after construction and safe to share across
threads. Persisted records never inline pixels; images are referenced by
relative path so trace files stay diffable.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np
from PIL import Image

from .errors import MalformedRecord, MissingField, OutOfBounds


# ---------------------------------------------------------------------------
# pixel-space primitives


@dataclass(frozen=True)
class RgbColor:
    r: int
    g: int
    b: int

    def __post_init__(self) -> None:
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 0 <= int(v) <= 255:
                raise ValueError(f"color component {name}={v!r} outside 0..255")
            object.__setattr__(self, name, int(v))

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.g, self.b)

    def distance(self, other: "RgbColor | tuple[int, int, int]") -> float:
        o = other.as_tuple() if isinstance(other, RgbColor) else tuple(other)
        return float(np.sqrt(sum((a - b) ** 2 for a, b in zip(self.as_tuple(), o))))


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box as (x, y, w, h): top-left corner plus extent."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.w < 1 or self.h < 1:
            raise ValueError(f"degenerate bbox {self.as_tuple()}: w and h must be >= 1")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.x, self.y, self.w, self.h)

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def within(self, width: int, height: int) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x2 <= width and self.y2 <= height

    def intersects(self, other: "BBox") -> bool:
        return not (
            self.x2 <= other.x or other.x2 <= self.x or self.y2 <= other.y or other.y2 <= self.y
        )

    def union(self, other: "BBox") -> "BBox":
        x = min(self.x, other.x)
        y = min(self.y, other.y)
        return BBox(x, y, max(self.x2, other.x2) - x, max(self.y2, other.y2) - y)

    def pad(self, px: int, width: int | None = None, height: int | None = None) -> "BBox":
        x = max(0, self.x - px)
        y = max(0, self.y - px)
        x2 = self.x2 + px if width is None else min(width, self.x2 + px)
        y2 = self.y2 + px if height is None else min(height, self.y2 + px)
        return BBox(x, y, max(1, x2 - x), max(1, y2 - y))


class RasterImage:
    """Immutable RGBA raster. The pixel buffer is (height, width, 4) uint8."""

    __slots__ = ("width", "height", "pixels")

    def __init__(self, pixels: np.ndarray):
        arr = np.asarray(pixels)
        if arr.ndim == 3 and arr.shape[2] == 3:
            alpha = np.full(arr.shape[:2] + (1,), 255, dtype=np.uint8)
            arr = np.concatenate([arr.astype(np.uint8), alpha], axis=2)
        if arr.ndim != 3 or arr.shape[2] != 4 or arr.dtype != np.uint8:
            raise ValueError("pixels must be (H, W, 4) uint8 or (H, W, 3) uint8")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)
        object.__setattr__(self, "height", int(arr.shape[0]))
        object.__setattr__(self, "width", int(arr.shape[1]))

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("RasterImage is immutable")

    def rgb(self) -> np.ndarray:
        """Read-only (H, W, 3) view of the color planes."""
        return self.pixels[:, :, :3]

    def mutable_copy(self) -> np.ndarray:
        return np.array(self.pixels[:, :, :3], dtype=np.uint8, copy=True)

    def crop(self, bbox: BBox) -> "RasterImage":
        if not bbox.within(self.width, self.height):
            raise OutOfBounds(f"bbox {bbox.as_tuple()} outside {self.width}x{self.height}")
        return RasterImage(self.pixels[bbox.y : bbox.y2, bbox.x : bbox.x2].copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.width == other.width and self.height == other.height and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __hash__(self) -> int:  # pragma: no cover - rarely needed
        return hash((self.width, self.height, self.pixels.tobytes()))

    @staticmethod
    def from_rgb(rgb: np.ndarray) -> "RasterImage":
        return RasterImage(np.asarray(rgb, dtype=np.uint8))

    @staticmethod
    def solid(width: int, height: int, color: RgbColor) -> "RasterImage":
        arr = np.empty((height, width, 3), dtype=np.uint8)
        arr[:, :] = color.as_tuple()
        return RasterImage.from_rgb(arr)

    @staticmethod
    def load_png(path: str | Path) -> "RasterImage":
        with Image.open(path) as im:
            return RasterImage(np.asarray(im.convert("RGBA")))

    def save_png(self, path: str | Path) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(self.pixels, mode="RGBA").save(path, format="PNG")


@dataclass(frozen=True)
class BinaryMap:
    """Row-major bit grid matching the dims of the image it was derived from."""

    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.bits, dtype=bool))
        if arr.shape != (self.height, self.width):
            raise ValueError(f"bits shape {arr.shape} != ({self.height}, {self.width})")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    @staticmethod
    def from_bits(bits: np.ndarray) -> "BinaryMap":
        bits = np.asarray(bits, dtype=bool)
        return BinaryMap(width=bits.shape[1], height=bits.shape[0], bits=bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMap):
            return NotImplemented
        return self.width == other.width and self.height == other.height and bool(
            np.array_equal(self.bits, other.bits)
        )


def _tight_bbox(bits: np.ndarray) -> BBox:
    rows = np.flatnonzero(bits.any(axis=1))
    cols = np.flatnonzero(bits.any(axis=0))
    if rows.size == 0:
        raise ValueError("empty bitmap has no bbox")
    return BBox(int(cols[0]), int(rows[0]), int(cols[-1] - cols[0] + 1), int(rows[-1] - rows[0] + 1))


@dataclass(frozen=True)
class SegmentMask:
    """One segmented chart element."""

    label: int
    bitmap: BinaryMap
    area: int
    bbox: BBox
    mean_color: RgbColor

    def __post_init__(self) -> None:
        if self.label < 1:
            raise ValueError("mask labels are positive")
        if self.area != self.bitmap.count:
            raise ValueError(f"area {self.area} != set bits {self.bitmap.count}")
        tight = _tight_bbox(self.bitmap.bits)
        if tight != self.bbox:
            raise ValueError(f"bbox {self.bbox.as_tuple()} is not tight ({tight.as_tuple()})")

    def relabeled(self, label: int) -> "SegmentMask":
        return SegmentMask(label, self.bitmap, self.area, self.bbox, self.mean_color)

    @staticmethod
    def from_bits(label: int, bits: np.ndarray, image: RasterImage | None = None) -> "SegmentMask":
        bm = BinaryMap.from_bits(bits)
        if image is not None:
            sel = image.rgb()[bm.bits]
            mean = RgbColor(*(int(round(float(v))) for v in sel.mean(axis=0)))
        else:
            mean = RgbColor(0, 0, 0)
        return SegmentMask(label, bm, bm.count, _tight_bbox(bm.bits), mean)


class AxisKind(str, enum.Enum):
    X = "x"
    Y_LEFT = "y_left"
    Y_RIGHT = "y_right"


@dataclass(frozen=True)
class AxisCalibration:
    """Paired tick values and pixel positions; the pixel-to-value bridge.

    Pairs are stored sorted by pixel position. For y axes values must increase
    as positions decrease (screen-up); for the x axis both increase together.
    """

    axis_kind: AxisKind
    values: tuple[float, ...]
    positions: tuple[int, ...]
    unit_suffix: str | None = None

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        poss = tuple(int(p) for p in self.positions)
        if len(vals) != len(poss) or len(vals) < 2:
            raise ValueError("need >= 2 (value, position) pairs of equal length")
        order = sorted(range(len(poss)), key=lambda i: poss[i])
        vals = tuple(vals[i] for i in order)
        poss = tuple(poss[i] for i in order)
        if any(poss[i] >= poss[i + 1] for i in range(len(poss) - 1)):
            raise ValueError("positions must be strictly monotonic")
        diffs = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
        if self.axis_kind is AxisKind.X:
            ok = all(d > 0 for d in diffs)
        else:
            ok = all(d < 0 for d in diffs)  # higher on screen = larger value
        if not ok:
            raise ValueError(f"values not monotonic in the required direction for {self.axis_kind}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "positions", poss)

    @property
    def value_span(self) -> tuple[float, float]:
        lo, hi = min(self.values), max(self.values)
        return (lo, hi)


@dataclass(frozen=True)
class LegendMap:
    """Numeric labels 1..N mapped to (entry text, text bbox in the legend crop)."""

    entries: Mapping[int, tuple[str, BBox]]

    def __post_init__(self) -> None:
        keys = sorted(self.entries)
        if keys != list(range(1, len(keys) + 1)):
            raise ValueError(f"legend labels must be dense 1..N, got {keys}")
        object.__setattr__(self, "entries", dict(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, label: int) -> tuple[str, BBox]:
        return self.entries[label]

    def items(self):
        return sorted(self.entries.items())


# ---------------------------------------------------------------------------
# chart descriptors


class ChartType(str, enum.Enum):
    BAR_VERTICAL = "bar_vertical"
    BAR_HORIZONTAL = "bar_horizontal"
    BAR_STACKED = "bar_stacked"
    BAR_GROUPED = "bar_grouped"
    BAR_3D = "bar_3d"
    PIE_SECTOR = "pie_sector"
    PIE_RING = "pie_ring"
    PIE_MULTI_RING = "pie_multi_ring"
    LINE_SINGLE = "line_single"
    LINE_MULTI = "line_multi"
    AREA_OVERLAY = "area_overlay"
    AREA_STACKED = "area_stacked"
    BOX_HORIZONTAL = "box_horizontal"
    BOX_VERTICAL = "box_vertical"
    SCATTER = "scatter"
    RADIAL = "radial"
    COMBINATION = "combination"
    NODE = "node"
    OTHER = "other"

    @property
    def family(self) -> str:
        return self.value.split("_")[0] if self is not ChartType.OTHER else "other"


class AnnotationStatus(str, enum.Enum):
    ANNOTATED = "annotated"
    UNANNOTATED = "unannotated"


class QAType(str, enum.Enum):
    NUMERIC = "numeric"
    RELATIONSHIP = "relationship"
    VALUE_COMPARISON = "value_comparison"


@dataclass(frozen=True)
class ChartMetadata:
    chart_type: ChartType
    title: str | None = None
    legend: tuple[str, ...] = ()
    x_axis_title: str | None = None
    y_axis_title: str | None = None
    right_y_axis_title: str | None = None
    x_tickers: tuple[str, ...] = ()
    y_tickers: tuple[str, ...] = ()
    right_y_tickers: tuple[str, ...] = ()
    annotation_status: AnnotationStatus = AnnotationStatus.UNANNOTATED
    visual_description: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "chart_type", ChartType(self.chart_type))
        object.__setattr__(self, "annotation_status", AnnotationStatus(self.annotation_status))
        object.__setattr__(self, "legend", tuple(self.legend))
        object.__setattr__(self, "x_tickers", tuple(self.x_tickers))
        object.__setattr__(self, "y_tickers", tuple(self.y_tickers))
        object.__setattr__(self, "right_y_tickers", tuple(self.right_y_tickers))

    def to_dict(self) -> dict[str, Any]:
        return {
            "chart_type": self.chart_type.value,
            "title": self.title,
            "legend": list(self.legend),
            "x_axis_title": self.x_axis_title,
            "y_axis_title": self.y_axis_title,
            "right_y_axis_title": self.right_y_axis_title,
            "x_tickers": list(self.x_tickers),
            "y_tickers": list(self.y_tickers),
            "right_y_tickers": list(self.right_y_tickers),
            "annotation_status": self.annotation_status.value,
            "visual_description": self.visual_description,
        }

    @staticmethod
    def from_dict(d: Mapping[str, Any]) -> "ChartMetadata":
        return ChartMetadata(
            chart_type=ChartType(d["chart_type"]),
            title=d.get("title"),
            legend=tuple(d.get("legend", ())),
            x_axis_title=d.get("x_axis_title"),
            y_axis_title=d.get("y_axis_title"),
            right_y_axis_title=d.get("right_y_axis_title"),
            x_tickers=tuple(d.get("x_tickers", ())),
            y_tickers=tuple(d.get("y_tickers", ())),
            right_y_tickers=tuple(d.get("right_y_tickers", ())),
            annotation_status=AnnotationStatus(d.get("annotation_status", "unannotated")),
            visual_description=d.get("visual_description", ""),
        )


# ---------------------------------------------------------------------------
# trajectories


MAX_ACTIONS = 15  # hard cap on tool-bearing steps in one trajectory


class StepStatus(str, enum.Enum):
    OK = "ok"
    TOOL_ERROR = "tool_error"
    UNSATISFACTORY = "unsatisfactory"


class TerminalMode(str, enum.Enum):
    TOOL_LOOP = "tool_loop"
    DIRECT = "direct"
    FALLBACK = "fallback"


@dataclass(frozen=True)
class ToolCall:
    tool: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "params", dict(self.params))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ToolCall):
            return NotImplemented
        return self.tool == other.tool and dict(self.params) == dict(other.params)


@dataclass(frozen=True)
class Observation:
    result: Any = None
    artifact: str | None = None  # relative path to a saved visualization
    status: StepStatus = StepStatus.OK

    def __post_init__(self) -> None:
        object.__setattr__(self, "status", StepStatus(self.status))


@dataclass(frozen=True)
class TrajectoryStep:
    index: int
    thought: str
    action: ToolCall | None = None
    observation: Observation | None = None


@dataclass(frozen=True)
class Terminal:
    answer: str
    mode: TerminalMode

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", TerminalMode(self.mode))


@dataclass(frozen=True)
class Trajectory:
    """Ordered thought/action/observation records plus the terminal answer.

    The transcript state after step t is the prefix of steps up to t; each new
    step only appends, so earlier records are never rewritten.
    """

    steps: tuple[TrajectoryStep, ...] = ()
    terminal: Terminal | None = None
    sample_id: str | None = None

    def __post_init__(self) -> None:
        steps = tuple(self.steps)
        for i, s in enumerate(steps):
            if s.index != i:
                raise ValueError(f"step indices must be consecutive from 0; step {i} has {s.index}")
        n_actions = sum(1 for s in steps if s.action is not None)
        if n_actions > MAX_ACTIONS:
            raise ValueError(f"{n_actions} actions exceed the {MAX_ACTIONS}-action cap")
        object.__setattr__(self, "steps", steps)

    @property
    def n_actions(self) -> int:
        return sum(1 for s in self.steps if s.action is not None)

    def append(self, step: TrajectoryStep) -> "Trajectory":
        return Trajectory(self.steps + (step,), self.terminal, self.sample_id)

    def finished(self, answer: str, mode: TerminalMode) -> "Trajectory":
        return Trajectory(self.steps, Terminal(answer, mode), self.sample_id)


def serialize_trajectory(traj: Trajectory) -> str:
    """Render a trajectory as structured text (JSON). Lossless round-trip."""

    def step_rec(s: TrajectoryStep) -> dict[str, Any]:
        rec: dict[str, Any] = {"index": s.index, "thought": s.thought}
        if s.action is not None:
            rec["action"] = {"tool": s.action.tool, "params": dict(s.action.params)}
        if s.observation is not None:
            rec["observation"] = {
                "result": s.observation.result,
                "artifact": s.observation.artifact,
                "status": s.observation.status.value,
            }
        return rec

    doc: dict[str, Any] = {
        "sample_id": traj.sample_id,
        "steps": [step_rec(s) for s in traj.steps],
        "terminal": None
        if traj.terminal is None
        else {"answer": traj.terminal.answer, "mode": traj.terminal.mode.value},
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def deserialize_trajectory(text: str) -> Trajectory:
    doc = json.loads(text)
    steps = []
    for rec in doc.get("steps", []):
        action = None
        if rec.get("action") is not None:
            action = ToolCall(rec["action"]["tool"], rec["action"].get("params", {}))
        obs = None
        if rec.get("observation") is not None:
            o = rec["observation"]
            obs = Observation(o.get("result"), o.get("artifact"), StepStatus(o.get("status", "ok")))
        steps.append(TrajectoryStep(rec["index"], rec.get("thought", ""), action, obs))
    terminal = None
    if doc.get("terminal") is not None:
        terminal = Terminal(doc["terminal"]["answer"], TerminalMode(doc["terminal"]["mode"]))
    return Trajectory(tuple(steps), terminal, doc.get("sample_id"))


# ---------------------------------------------------------------------------
# QA dataset records


@dataclass(frozen=True)
class QASample:
    image_ref: str
    query: str
    ground_truth: str
    qa_type: QAType = QAType.NUMERIC
    sample_id: str | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not str(self.ground_truth):
            raise ValueError("ground_truth must be non-empty")
        object.__setattr__(self, "qa_type", QAType(self.qa_type))
        object.__setattr__(self, "extras", dict(self.extras))

    def to_record(self) -> dict[str, Any]:
        rec = {
            "image": self.image_ref,
            "query": self.query,
            "ground_truth": self.ground_truth,
            "qa_type": self.qa_type.value,
        }
        if self.sample_id is not None:
            rec["id"] = self.sample_id
        rec.update(self.extras)
        return rec


_REQUIRED_FIELDS = ("image", "query", "ground_truth", "qa_type")


def load_qa_dataset(path: str | Path) -> list[QASample]:
    """Parse a UTF-8 line-delimited QA dataset. Errors carry line numbers."""
    samples: list[QASample] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
            if not isinstance(rec, dict):
                raise MalformedRecord(line_no, "record is not an object")
            for name in _REQUIRED_FIELDS:
                if name not in rec or rec[name] in (None, ""):
                    raise MissingField(name, line_no)
            extras = {k: v for k, v in rec.items() if k not in _REQUIRED_FIELDS + ("id",)}
            try:
                samples.append(
                    QASample(
                        image_ref=str(rec["image"]),
                        query=str(rec["query"]),
                        ground_truth=str(rec["ground_truth"]),
                        qa_type=QAType(rec["qa_type"]),
                        sample_id=str(rec["id"]) if "id" in rec else f"line{line_no}",
                        extras=extras,
                    )
                )
            except ValueError as exc:
                raise MalformedRecord(line_no, str(exc)) from exc
    return samples


def save_qa_dataset(samples: Iterable[QASample], path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(json.dumps(s.to_record(), sort_keys=True) + "\n")
