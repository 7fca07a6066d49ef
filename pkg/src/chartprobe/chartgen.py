"""Deterministic synthetic chart renderer, ground-truth oracle, and QA factory.

Renders are flat-filled and text is hard-edged bitmap type, so every painted
pixel is accounted for in the ground truth. The same (spec, seed) pair always
produces byte-identical images.
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from . import draw, font
from .errors import InvalidSpec
from .model import (
    AnnotationStatus,
    BBox,
    ChartMetadata,
    ChartType,
    QASample,
    QAType,
    RasterImage,
    RgbColor,
)

TEXT_COLOR = (20, 20, 20)
AXIS_COLOR = (60, 60, 60)
GRID_COLOR = (223, 223, 223)
RING_COLOR = (176, 176, 176)
INK_DARK = (40, 40, 40)
WHITE = (255, 255, 255)

PALETTE_POOL = (
    RgbColor(31, 119, 180),
    RgbColor(255, 127, 14),
    RgbColor(44, 160, 44),
    RgbColor(214, 39, 40),
    RgbColor(148, 103, 189),
    RgbColor(23, 190, 207),
    RgbColor(188, 189, 34),
    RgbColor(140, 86, 75),
)

TITLE_POOL = (
    "Quarterly Revenue by Region",
    "Monthly Active Users",
    "Energy Output Overview",
    "Market Share Breakdown",
    "Rainfall by Month",
    "Server Load Summary",
    "Sales Volume Report",
    "Population Trends",
    "Expense Distribution",
    "Latency Overview",
)

CATEGORY_POOLS = (
    ("2016", "2017", "2018", "2019", "2020", "2021", "2022"),
    ("Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul"),
    ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"),
    ("Q1", "Q2", "Q3", "Q4"),
    ("North", "South", "East", "West", "Center"),
    ("Alpha", "Beta", "Gamma", "Delta", "Omega", "Kappa"),
)

SERIES_POOLS = (
    ("Brazil", "Canada", "Japan", "Kenya", "Norway", "Chile"),
    ("Product A", "Product B", "Product C", "Product D"),
    ("Steel", "Copper", "Nickel", "Zinc", "Cobalt"),
    ("Rock", "Jazz", "Blues", "Folk", "Pop"),
    ("Basalt", "Granite", "Marble", "Slate"),
)

X_TITLE_POOL = ("Year", "Month", "Quarter", "Category", "Region")
Y_TITLE_POOL = ("Value", "Revenue", "Units", "Score", "Output")


class GenFamily(str, enum.Enum):
    BAR_V = "bar_v"
    BAR_H = "bar_h"
    BAR_GROUPED = "bar_grouped"
    BAR_STACKED = "bar_stacked"
    LINE_SINGLE = "line_single"
    LINE_MULTI = "line_multi"
    PIE_SECTOR = "pie_sector"
    PIE_RING = "pie_ring"
    AREA_OVERLAY = "area_overlay"
    AREA_STACKED = "area_stacked"
    BOX_V = "box_v"
    BOX_H = "box_h"
    SCATTER = "scatter"
    RADIAL = "radial"

    @property
    def chart_type(self) -> ChartType:
        return _FAMILY_TO_TYPE[self]


_FAMILY_TO_TYPE = {
    GenFamily.BAR_V: ChartType.BAR_VERTICAL,
    GenFamily.BAR_H: ChartType.BAR_HORIZONTAL,
    GenFamily.BAR_GROUPED: ChartType.BAR_GROUPED,
    GenFamily.BAR_STACKED: ChartType.BAR_STACKED,
    GenFamily.LINE_SINGLE: ChartType.LINE_SINGLE,
    GenFamily.LINE_MULTI: ChartType.LINE_MULTI,
    GenFamily.PIE_SECTOR: ChartType.PIE_SECTOR,
    GenFamily.PIE_RING: ChartType.PIE_RING,
    GenFamily.AREA_OVERLAY: ChartType.AREA_OVERLAY,
    GenFamily.AREA_STACKED: ChartType.AREA_STACKED,
    GenFamily.BOX_V: ChartType.BOX_VERTICAL,
    GenFamily.BOX_H: ChartType.BOX_HORIZONTAL,
    GenFamily.SCATTER: ChartType.SCATTER,
    GenFamily.RADIAL: ChartType.RADIAL,
}

BOX_STAT_KEYS = ("min", "q1", "median", "q3", "max")


@dataclass(frozen=True)
class ChartSpec:
    family: GenFamily
    series: Mapping[str, tuple[float, ...]]
    categories: tuple[str, ...]
    annotated: bool = False
    style_seed: int = 0
    canvas: tuple[int, int] = (640, 480)
    palette: tuple[RgbColor, ...] = ()
    title: str | None = None
    x_axis_title: str | None = None
    y_axis_title: str | None = None
    value_ticks: tuple[float, ...] | None = None
    reference_value: float = 100.0
    legend_at_axis: bool = False
    force_legend: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", GenFamily(self.family))
        series = {str(k): tuple(float(v) for v in vs) for k, vs in dict(self.series).items()}
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "categories", tuple(str(c) for c in self.categories))
        object.__setattr__(self, "palette", tuple(self.palette))
        if self.value_ticks is not None:
            object.__setattr__(self, "value_ticks", tuple(float(t) for t in self.value_ticks))
        if not series:
            raise InvalidSpec("at least one series required")
        for name, vals in series.items():
            if any(not math.isfinite(v) for v in vals):
                raise InvalidSpec(f"series {name!r} contains non-finite values")
        if self.family in (GenFamily.BOX_V, GenFamily.BOX_H):
            if set(series) != set(BOX_STAT_KEYS):
                raise InvalidSpec(f"box charts need series keys {BOX_STAT_KEYS}")
        if self.family is not GenFamily.SCATTER:
            for name, vals in series.items():
                if len(vals) != len(self.categories):
                    raise InvalidSpec(
                        f"series {name!r} has {len(vals)} values for {len(self.categories)} categories"
                    )
        pal = self.palette
        for i in range(len(pal)):
            for j in range(i + 1, len(pal)):
                if pal[i].distance(pal[j]) <= 60:
                    raise InvalidSpec(
                        f"palette colors {pal[i].as_tuple()} / {pal[j].as_tuple()} too close"
                    )

    def digest(self) -> int:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family.value,
            "series": {k: list(v) for k, v in self.series.items()},
            "categories": list(self.categories),
            "annotated": self.annotated,
            "style_seed": self.style_seed,
            "canvas": list(self.canvas),
            "palette": [c.as_tuple() for c in self.palette],
            "title": self.title,
            "x_axis_title": self.x_axis_title,
            "y_axis_title": self.y_axis_title,
            "value_ticks": None if self.value_ticks is None else list(self.value_ticks),
            "reference_value": self.reference_value,
            "legend_at_axis": self.legend_at_axis,
            "force_legend": self.force_legend,
        }

    @staticmethod
    def from_dict(d: Mapping[str, Any]) -> "ChartSpec":
        return ChartSpec(
            family=GenFamily(d["family"]),
            series={k: tuple(v) for k, v in d["series"].items()},
            categories=tuple(d["categories"]),
            annotated=bool(d.get("annotated", False)),
            style_seed=int(d.get("style_seed", 0)),
            canvas=tuple(d.get("canvas", (640, 480))),
            palette=tuple(RgbColor(*c) for c in d.get("palette", ())),
            title=d.get("title"),
            x_axis_title=d.get("x_axis_title"),
            y_axis_title=d.get("y_axis_title"),
            value_ticks=None if d.get("value_ticks") is None else tuple(d["value_ticks"]),
            reference_value=float(d.get("reference_value", 100.0)),
            legend_at_axis=bool(d.get("legend_at_axis", False)),
            force_legend=bool(d.get("force_legend", False)),
        )


@dataclass
class GroundTruth:
    """Pixel geometry and the data table behind one rendered chart."""

    spec: ChartSpec
    metadata: ChartMetadata
    background: tuple[int, int, int] = WHITE
    plot_rect: tuple[int, int, int, int] | None = None
    ticks: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    series_colors: dict[str, tuple[int, int, int]] = field(default_factory=dict)
    legend: dict[str, Any] | None = None
    title_bbox: tuple[int, int, int, int] | None = None
    bars: list[dict[str, Any]] = field(default_factory=list)
    slices: list[dict[str, Any]] = field(default_factory=list)
    points: list[dict[str, Any]] = field(default_factory=list)
    layers: list[dict[str, Any]] = field(default_factory=list)
    boxes: list[dict[str, Any]] = field(default_factory=list)
    radial: dict[str, Any] | None = None
    painted: dict[str, int] = field(default_factory=dict)

    def value(self, series: str, category: str) -> float:
        idx = self.spec.categories.index(category)
        return self.spec.series[series][idx]

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "metadata": self.metadata.to_dict(),
            "background": list(self.background),
            "plot_rect": None if self.plot_rect is None else list(self.plot_rect),
            "ticks": self.ticks,
            "series_colors": {k: list(v) for k, v in self.series_colors.items()},
            "legend": self.legend,
            "title_bbox": None if self.title_bbox is None else list(self.title_bbox),
            "bars": self.bars,
            "slices": self.slices,
            "points": self.points,
            "layers": self.layers,
            "boxes": self.boxes,
            "radial": self.radial,
            "painted": self.painted,
        }

    @staticmethod
    def from_dict(d: Mapping[str, Any]) -> "GroundTruth":
        return GroundTruth(
            spec=ChartSpec.from_dict(d["spec"]),
            metadata=ChartMetadata.from_dict(d["metadata"]),
            background=tuple(d.get("background", WHITE)),
            plot_rect=None if d.get("plot_rect") is None else tuple(d["plot_rect"]),
            ticks={k: list(v) for k, v in d.get("ticks", {}).items()},
            series_colors={k: tuple(v) for k, v in d.get("series_colors", {}).items()},
            legend=d.get("legend"),
            title_bbox=None if d.get("title_bbox") is None else tuple(d["title_bbox"]),
            bars=list(d.get("bars", [])),
            slices=list(d.get("slices", [])),
            points=list(d.get("points", [])),
            layers=list(d.get("layers", [])),
            boxes=list(d.get("boxes", [])),
            radial=d.get("radial"),
            painted=dict(d.get("painted", {})),
        )


def format_value(v: float) -> str:
    if abs(v - round(v)) < 1e-9:
        return str(int(round(v)))
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return s


def _nice_ticks(vmax: float) -> tuple[float, ...]:
    """0-based tick values with a step from {1, 2, 2.5, 5} x 10^k."""
    if vmax <= 0:
        vmax = 1.0
    target = vmax / 5.5
    k = math.floor(math.log10(target)) if target > 0 else 0
    best = None
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * (10.0**k)
        n = math.ceil(vmax / step)
        if 4 <= n <= 8 and (best is None or n > best[1]):
            best = (step, n)
    if best is None:
        step = 10.0**k
        n = max(4, min(8, math.ceil(vmax / step)))
        best = (step, n)
    step, n = best
    while n * step < vmax:
        n += 1
    return tuple(round(i * step, 10) for i in range(n + 1))


def _tick_label(v: float, step: float) -> str:
    if abs(step - round(step)) < 1e-9 and abs(v - round(v)) < 1e-9:
        return str(int(round(v)))
    dec = 1 if abs(step * 10 - round(step * 10)) < 1e-9 else 2
    return f"{v:.{dec}f}"


class _Render:
    """Working state while rasterizing one chart."""

    def __init__(self, spec: ChartSpec, seed: int):
        self.spec = spec
        self.rng = random.Random((seed & 0xFFFFFFFF) * 1_000_003 + spec.style_seed)
        self.W, self.H = spec.canvas
        self.bg = WHITE if self.rng.random() < 0.75 else (240, 240, 240)
        self.canvas = np.empty((self.H, self.W, 3), dtype=np.uint8)
        self.canvas[:, :] = self.bg
        self.truth = GroundTruth(
            spec=spec,
            metadata=ChartMetadata(chart_type=spec.family.chart_type),
            background=self.bg,
        )
        self.title: str | None = None
        self.legend_entries: list[str] = []
        self._legend_colors: dict[str, tuple[int, int, int]] = {}
        self.x_title: str | None = None
        self.y_title: str | None = None
        self.top = 8  # running top offset while laying out the header

    # ---- header -----------------------------------------------------------

    def draw_title(self) -> None:
        spec = self.spec
        title = spec.title if spec.title is not None else self.rng.choice(TITLE_POOL)
        if self.rng.random() < 0.08 and spec.title is None:
            title = None
        self.title = title
        if title is None:
            return
        size = 14
        tw, th = font.measure_text(title, size)
        x = max(4, (self.W - tw) // 2)
        font.render_text(self.canvas, x, self.top, title, size, TEXT_COLOR)
        self.truth.title_bbox = (x, self.top, tw, th)
        self.top += th + 6

    def needs_legend(self) -> bool:
        spec = self.spec
        if spec.family in (GenFamily.BOX_V, GenFamily.BOX_H):
            return False
        if spec.force_legend or spec.legend_at_axis:
            return True
        if spec.family in (GenFamily.PIE_SECTOR, GenFamily.PIE_RING, GenFamily.RADIAL,
                           GenFamily.SCATTER):
            return True
        return len(spec.series) > 1

    def legend_labels(self) -> list[str]:
        spec = self.spec
        if spec.family in (GenFamily.PIE_SECTOR, GenFamily.PIE_RING, GenFamily.RADIAL):
            return list(spec.categories)
        return list(spec.series)

    def draw_legend(self, colors: dict[str, tuple[int, int, int]]) -> None:
        if not self.needs_legend():
            return
        self.legend_entries = self.legend_labels()
        self._legend_colors = colors
        if self.spec.legend_at_axis:
            return  # painted after the data so bars cannot cover it
        labels = self.legend_entries
        size = 12
        marker = size
        gap = 5  # marker sits this many px left of the text
        entries = []
        widths = [marker + gap + font.measure_text(t, size)[0] + 18 for t in labels]
        # right-aligned rows in the header strip, wrapping when too wide
        rows: list[list[int]] = [[]]
        avail = self.W - 20
        used = 0
        for i, wdt in enumerate(widths):
            if used + wdt > avail and rows[-1]:
                rows.append([])
                used = 0
            rows[-1].append(i)
            used += wdt
        y = self.top
        for row in rows:
            total = sum(widths[i] for i in row)
            x = max(4, self.W - 16 - total)
            for i in row:
                label = labels[i]
                tw, th = font.measure_text(label, size)
                draw.fill_rect(self.canvas, x, y, marker, marker, colors[label])
                tx = x + marker + gap
                font.render_text(self.canvas, tx, y, label, size, TEXT_COLOR)
                entries.append(
                    {"text": label, "marker_rect": [x, y, marker, marker],
                     "color": list(colors[label]), "text_bbox": [tx, y, tw, th]}
                )
                x += widths[i]
            y += marker + 8
        self.top = y
        self._record_legend(entries)

    def draw_deferred_legend(self) -> None:
        """At-axis legend variant: a backed stack drawn over the finished plot."""
        if not (self.spec.legend_at_axis and self.needs_legend()):
            return
        labels = self.legend_entries
        colors = self._legend_colors
        size = 12
        marker = size
        gap = 5
        px, py = (self.truth.plot_rect or (72, self.top + 8, 0, 0))[:2]
        x = px + 6
        y = py + 6
        entry_w = max(marker + gap + font.measure_text(t, size)[0] for t in labels)
        stack_h = len(labels) * (marker + 8) - 8
        draw.fill_rect(self.canvas, x - 4, y - 4, entry_w + 8, stack_h + 8, self.bg)
        entries = []
        for label in labels:
            tw, th = font.measure_text(label, size)
            tx = x + marker + gap
            draw.fill_rect(self.canvas, x, y, marker, marker, colors[label])
            font.render_text(self.canvas, tx, y, label, size, TEXT_COLOR)
            entries.append(
                {"text": label, "marker_rect": [x, y, marker, marker],
                 "color": list(colors[label]), "text_bbox": [tx, y, tw, th]}
            )
            y += marker + 8
        self._record_legend(entries)

    def _record_legend(self, entries: list[dict]) -> None:
        if not entries:
            return
        xs = [e["marker_rect"][0] for e in entries]
        ys = [e["marker_rect"][1] for e in entries]
        x2s = [e["text_bbox"][0] + e["text_bbox"][2] for e in entries]
        y2s = [max(e["marker_rect"][1] + e["marker_rect"][3],
                   e["text_bbox"][1] + e["text_bbox"][3]) for e in entries]
        self.truth.legend = {
            "bbox": [min(xs), min(ys), max(x2s) - min(xs), max(y2s) - min(ys)],
            "entries": entries,
        }

    # ---- axes -------------------------------------------------------------

    def plot_box(self, left=72, right=26, bottom=54) -> tuple[int, int, int, int]:
        px = left
        py = self.top + 8
        pw = self.W - right - px
        ph = self.H - bottom - py
        self.truth.plot_rect = (px, py, pw, ph)
        return px, py, pw, ph

    def value_ticks(self, vmax: float) -> tuple[float, ...]:
        if self.spec.value_ticks is not None:
            return self.spec.value_ticks
        return _nice_ticks(vmax * 1.05)

    def draw_value_axis_y(self, ticks, px, py, pw, ph, gridlines: bool) -> dict[float, int]:
        """Left y value axis. Returns value -> pixel row."""
        tmax = ticks[-1]
        rows = {t: py + ph - int(round(t * ph / tmax)) for t in ticks}
        step = ticks[1] - ticks[0]
        size = 12
        truth_rows = []
        for t in ticks:
            r = rows[t]
            if gridlines and t > 0:
                draw.fill_rect(self.canvas, px, r, pw, 1, GRID_COLOR)
            draw.fill_rect(self.canvas, px - 4, r, 4, 1, AXIS_COLOR)
            label = _tick_label(t, step)
            tw, _ = font.measure_text(label, size)
            top_off, ink_h = font.text_ink_height(label, size)
            ly = r - top_off - ink_h // 2
            lx = px - 8 - tw
            font.render_text(self.canvas, lx, ly, label, size, TEXT_COLOR)
            truth_rows.append({"text": label, "value": t, "pos": r,
                               "bbox": [lx, ly, tw, size]})
        self.truth.ticks["y"] = truth_rows
        return rows

    def draw_value_axis_x(self, ticks, px, py, pw, ph, gridlines: bool) -> dict[float, int]:
        """Bottom x value axis (horizontal bars). Returns value -> pixel col."""
        tmax = ticks[-1]
        cols = {t: px + int(round(t * pw / tmax)) for t in ticks}
        step = ticks[1] - ticks[0]
        size = 12
        truth_cols = []
        for t in ticks:
            c = cols[t]
            if gridlines and t > 0:
                draw.fill_rect(self.canvas, c, py, 1, ph, GRID_COLOR)
            draw.fill_rect(self.canvas, c, py + ph, 1, 4, AXIS_COLOR)
            label = _tick_label(t, step)
            tw, _ = font.measure_text(label, size)
            lx = c - tw // 2
            ly = py + ph + 8
            font.render_text(self.canvas, lx, ly, label, size, TEXT_COLOR)
            truth_cols.append({"text": label, "value": t, "pos": c,
                               "bbox": [lx, ly, tw, size]})
        self.truth.ticks["x"] = truth_cols
        return cols

    def draw_category_axis_x(self, px, py, pw, ph) -> dict[str, int]:
        """Category labels under the plot. Returns category -> center col."""
        cats = self.spec.categories
        n = len(cats)
        size = 12
        centers = {}
        truth = []
        for i, cat in enumerate(cats):
            cx = px + int(round((i + 0.5) * pw / n))
            centers[cat] = cx
            tw, _ = font.measure_text(cat, size)
            lx = cx - tw // 2
            ly = py + ph + 8
            font.render_text(self.canvas, lx, ly, cat, size, TEXT_COLOR)
            truth.append({"text": cat, "value": None, "pos": cx, "bbox": [lx, ly, tw, size]})
        self.truth.ticks["x"] = truth
        return centers

    def draw_category_axis_y(self, px, py, pw, ph) -> dict[str, int]:
        """Category labels left of the plot (horizontal charts)."""
        cats = self.spec.categories
        n = len(cats)
        size = 12
        centers = {}
        truth = []
        for i, cat in enumerate(cats):
            cy = py + int(round((i + 0.5) * ph / n))
            centers[cat] = cy
            tw, _ = font.measure_text(cat, size)
            top_off, ink_h = font.text_ink_height(cat, size)
            ly = cy - top_off - ink_h // 2
            lx = px - 8 - tw
            font.render_text(self.canvas, lx, ly, cat, size, TEXT_COLOR)
            truth.append({"text": cat, "value": None, "pos": cy, "bbox": [lx, ly, tw, size]})
        self.truth.ticks["y"] = truth
        return centers

    def draw_axis_lines(self, px, py, pw, ph) -> None:
        draw.fill_rect(self.canvas, px, py, 1, ph + 1, AXIS_COLOR)
        draw.fill_rect(self.canvas, px, py + ph, pw, 1, AXIS_COLOR)

    def draw_axis_titles(self, x_title: str | None, y_title: str | None, px, py, pw, ph) -> None:
        size = 12
        self.x_title, self.y_title = x_title, y_title
        if x_title:
            tw, _ = font.measure_text(x_title, size)
            font.render_text(self.canvas, px + (pw - tw) // 2, self.H - 16, x_title, size, TEXT_COLOR)
        if y_title:
            block = font.render_text_block(y_title, size)
            rot = np.rot90(block, k=1)  # reads bottom-to-top
            h, w = rot.shape
            y0 = py + max(0, (ph - h) // 2)
            x0 = 6
            region = self.canvas[y0 : y0 + h, x0 : x0 + w]
            region[rot[: region.shape[0], : region.shape[1]]] = TEXT_COLOR

    def annotate_value(self, text: str, x: int, y: int, size: int = 10) -> None:
        font.render_text(self.canvas, x, y, text, size, TEXT_COLOR)

    def finish_metadata(self) -> None:
        t = self.truth
        md = ChartMetadata(
            chart_type=self.spec.family.chart_type,
            title=self.title,
            legend=tuple(self.legend_entries),
            x_axis_title=self.x_title,
            y_axis_title=self.y_title,
            x_tickers=tuple(rec["text"] for rec in t.ticks.get("x", ())),
            y_tickers=tuple(rec["text"] for rec in t.ticks.get("y", ())),
            annotation_status=AnnotationStatus.ANNOTATED
            if self.spec.annotated
            else AnnotationStatus.UNANNOTATED,
            visual_description=f"{self.spec.family.value} chart with "
            f"{len(self.spec.categories)} categories",
        )
        t.metadata = md


# ---------------------------------------------------------------------------
# family renderers


def _series_colors(spec: ChartSpec, rng: random.Random, keys: list[str]) -> dict[str, tuple[int, int, int]]:
    pal = list(spec.palette) if spec.palette else list(PALETTE_POOL)
    if len(pal) < len(keys):
        raise InvalidSpec(f"palette has {len(pal)} colors for {len(keys)} series")
    return {k: pal[i].as_tuple() for i, k in enumerate(keys)}


def _render_bars(r: _Render) -> None:
    spec = r.spec
    horizontal = spec.family is GenFamily.BAR_H
    stacked = spec.family is GenFamily.BAR_STACKED
    grouped = spec.family is GenFamily.BAR_GROUPED
    names = list(spec.series)
    colors = _series_colors(spec, r.rng, names)
    r.truth.series_colors = {k: colors[k] for k in names}
    r.draw_title()
    r.draw_legend(colors)

    if stacked:
        vmax = max(sum(spec.series[n][i] for n in names) for i in range(len(spec.categories)))
    else:
        vmax = max(max(vs) for vs in spec.series.values())
    ticks = r.value_ticks(vmax)
    grid = r.rng.random() < 0.6

    if horizontal:
        px, py, pw, ph = r.plot_box(left=86)
        cols = r.draw_value_axis_x(ticks, px, py, pw, ph, grid)
        centers = r.draw_category_axis_y(px, py, pw, ph)
        tmax = ticks[-1]

        def x_of(v: float) -> int:
            return px + int(round(v * pw / tmax))

        n = len(spec.categories)
        slot = ph / n
        for ci, cat in enumerate(spec.categories):
            cy = centers[cat]
            if grouped:
                k = len(names)
                gh = slot * 0.8
                bh = max(3, int(gh / k) - 1)
                top0 = int(round(cy - gh / 2))
                for si, name in enumerate(names):
                    v = spec.series[name][ci]
                    y0 = top0 + si * (bh + 1)
                    x1 = x_of(v)
                    draw.fill_rect(r.canvas, px + 1, y0, x1 - px, bh, colors[name])
                    r.truth.bars.append(
                        {"series": name, "category": cat, "value": v,
                         "rect": [px + 1, y0, x1 - px, bh], "color": list(colors[name])}
                    )
                    if spec.annotated:
                        r.annotate_value(format_value(v), x1 + 4, y0 + bh // 2 - 5)
            elif stacked:
                bh = max(4, int(slot * 0.55))
                y0 = int(round(cy - bh / 2))
                cum = 0.0
                for name in names:
                    v = spec.series[name][ci]
                    xa, xb = x_of(cum), x_of(cum + v)
                    draw.fill_rect(r.canvas, xa + 1, y0, xb - xa, bh, colors[name])
                    r.truth.bars.append(
                        {"series": name, "category": cat, "value": v,
                         "rect": [xa + 1, y0, xb - xa, bh], "color": list(colors[name])}
                    )
                    cum += v
                if spec.annotated:
                    r.annotate_value(format_value(cum), x_of(cum) + 4, y0 + bh // 2 - 5)
            else:
                name = names[0]
                v = spec.series[name][ci]
                bh = max(4, int(slot * 0.55))
                y0 = int(round(cy - bh / 2))
                x1 = x_of(v)
                draw.fill_rect(r.canvas, px + 1, y0, x1 - px, bh, colors[name])
                r.truth.bars.append(
                    {"series": name, "category": cat, "value": v,
                     "rect": [px + 1, y0, x1 - px, bh], "color": list(colors[name])}
                )
                if spec.annotated:
                    r.annotate_value(format_value(v), x1 + 4, y0 + bh // 2 - 5)
        r.draw_axis_lines(px, py, pw, ph)
        r.draw_axis_titles(
            spec.x_axis_title or r.rng.choice(Y_TITLE_POOL),
            spec.y_axis_title or r.rng.choice(X_TITLE_POOL),
            px, py, pw, ph,
        )
    else:
        px, py, pw, ph = r.plot_box()
        rows = r.draw_value_axis_y(ticks, px, py, pw, ph, grid)
        centers = r.draw_category_axis_x(px, py, pw, ph)
        tmax = ticks[-1]

        def y_of(v: float) -> int:
            return py + ph - int(round(v * ph / tmax))

        n = len(spec.categories)
        slot = pw / n
        base = py + ph
        for ci, cat in enumerate(spec.categories):
            cx = centers[cat]
            if grouped:
                k = len(names)
                gw = slot * 0.8
                bw = max(3, int(gw / k) - 1)
                left0 = int(round(cx - gw / 2))
                for si, name in enumerate(names):
                    v = spec.series[name][ci]
                    x0 = left0 + si * (bw + 1)
                    y1 = y_of(v)
                    draw.fill_rect(r.canvas, x0, y1, bw, base - y1, colors[name])
                    r.truth.bars.append(
                        {"series": name, "category": cat, "value": v,
                         "rect": [x0, y1, bw, base - y1], "color": list(colors[name])}
                    )
                    if spec.annotated:
                        tw, _ = font.measure_text(format_value(v), 10)
                        r.annotate_value(format_value(v), x0 + bw // 2 - tw // 2, y1 - 13)
            elif stacked:
                bw = max(4, int(slot * 0.55))
                x0 = int(round(cx - bw / 2))
                cum = 0.0
                for name in names:
                    v = spec.series[name][ci]
                    ya, yb = y_of(cum), y_of(cum + v)
                    draw.fill_rect(r.canvas, x0, yb, bw, ya - yb, colors[name])
                    r.truth.bars.append(
                        {"series": name, "category": cat, "value": v,
                         "rect": [x0, yb, bw, ya - yb], "color": list(colors[name])}
                    )
                    cum += v
                if spec.annotated:
                    tw, _ = font.measure_text(format_value(cum), 10)
                    r.annotate_value(format_value(cum), x0 + bw // 2 - tw // 2, y_of(cum) - 13)
            else:
                name = names[0]
                v = spec.series[name][ci]
                bw = max(4, int(slot * 0.55))
                x0 = int(round(cx - bw / 2))
                y1 = y_of(v)
                draw.fill_rect(r.canvas, x0, y1, bw, base - y1, colors[name])
                r.truth.bars.append(
                    {"series": name, "category": cat, "value": v,
                     "rect": [x0, y1, bw, base - y1], "color": list(colors[name])}
                )
                if spec.annotated:
                    tw, _ = font.measure_text(format_value(v), 10)
                    r.annotate_value(format_value(v), x0 + bw // 2 - tw // 2, y1 - 13)
        r.draw_axis_lines(px, py, pw, ph)
        r.draw_axis_titles(
            spec.x_axis_title or r.rng.choice(X_TITLE_POOL),
            spec.y_axis_title or r.rng.choice(Y_TITLE_POOL),
            px, py, pw, ph,
        )


def _render_lines(r: _Render) -> None:
    spec = r.spec
    names = list(spec.series)
    colors = _series_colors(spec, r.rng, names)
    r.truth.series_colors = {k: colors[k] for k in names}
    r.draw_title()
    r.draw_legend(colors)
    vmax = max(max(vs) for vs in spec.series.values())
    ticks = r.value_ticks(vmax)
    grid = r.rng.random() < 0.6
    px, py, pw, ph = r.plot_box()
    r.draw_value_axis_y(ticks, px, py, pw, ph, grid)
    centers = r.draw_category_axis_x(px, py, pw, ph)
    tmax = ticks[-1]
    y_of = lambda v: py + ph - int(round(v * ph / tmax))
    dots = r.rng.random() < 0.6
    for name in names:
        pts = [(centers[c], y_of(spec.series[name][i])) for i, c in enumerate(spec.categories)]
        draw.draw_polyline(r.canvas, pts, colors[name], thickness=3)
        if dots:
            for (x, y) in pts:
                draw.fill_disc(r.canvas, x, y, 4, colors[name])
        for i, cat in enumerate(spec.categories):
            v = spec.series[name][i]
            r.truth.points.append(
                {"series": name, "category": cat, "x": pts[i][0], "y": pts[i][1],
                 "value": v, "color": list(colors[name])}
            )
            if spec.annotated:
                label = format_value(v)
                tw, _ = font.measure_text(label, 10)
                r.annotate_value(label, pts[i][0] - tw // 2, pts[i][1] - 16)
    r.draw_axis_lines(px, py, pw, ph)
    r.draw_axis_titles(
        spec.x_axis_title or r.rng.choice(X_TITLE_POOL),
        spec.y_axis_title or r.rng.choice(Y_TITLE_POOL),
        px, py, pw, ph,
    )


def _render_pie(r: _Render) -> None:
    spec = r.spec
    cats = list(spec.categories)
    values = next(iter(spec.series.values()))
    colors = _series_colors(spec, r.rng, cats)
    r.truth.series_colors = {c: colors[c] for c in cats}
    r.draw_title()
    r.draw_legend(colors)
    px, py, pw, ph = r.plot_box(left=40, right=40, bottom=30)
    cx = px + pw / 2
    cy = py + ph / 2
    R = min(pw, ph) / 2 - 14
    r_in = 0.45 * R if spec.family is GenFamily.PIE_RING else 0.0
    total = sum(values)
    a = 0.0
    boundaries = []
    for cat, v in zip(cats, values):
        frac = v / total
        a1 = a + frac * draw.TAU
        painted = draw.fill_wedge(r.canvas, cx, cy, r_in, R, a, a1, colors[cat])
        r.truth.slices.append(
            {"category": cat, "value": v, "fraction": frac, "a0": a, "a1": a1,
             "color": list(colors[cat]), "pixel_count": int(painted.sum())}
        )
        boundaries.append(a)
        a = a1
    if r.rng.random() < 0.4 and len(cats) > 1:
        for ang in boundaries:
            ex = cx + (R + 1) * math.sin(ang)
            ey = cy - (R + 1) * math.cos(ang)
            sx = cx + r_in * math.sin(ang)
            sy = cy - r_in * math.cos(ang)
            draw.draw_segment(r.canvas, (sx, sy), (ex, ey), r.bg, 1)
    if spec.annotated:
        for rec in r.truth.slices:
            mid = (rec["a0"] + rec["a1"]) / 2
            label = f"{rec['fraction'] * 100:.1f}%"
            tw, th = font.measure_text(label, 10)
            lx = cx + (R + 10) * math.sin(mid)
            ly = cy - (R + 10) * math.cos(mid)
            lx = lx - tw if math.sin(mid) < 0 else lx
            ly = ly - th if math.cos(mid) > 0 else ly
            r.annotate_value(label, int(lx), int(ly))


def _render_area(r: _Render) -> None:
    spec = r.spec
    stacked = spec.family is GenFamily.AREA_STACKED
    names = list(spec.series)
    colors = _series_colors(spec, r.rng, names)
    r.truth.series_colors = {k: colors[k] for k in names}
    r.draw_title()
    r.draw_legend(colors)
    if stacked:
        vmax = max(sum(spec.series[n][i] for n in names) for i in range(len(spec.categories)))
    else:
        vmax = max(max(vs) for vs in spec.series.values())
    ticks = r.value_ticks(vmax)
    px, py, pw, ph = r.plot_box()
    r.draw_value_axis_y(ticks, px, py, pw, ph, False)
    centers = r.draw_category_axis_x(px, py, pw, ph)
    tmax = ticks[-1]
    y_of = lambda v: py + ph - int(round(v * ph / tmax))
    xs = [centers[c] for c in spec.categories]

    def interp_vals(vals: list[float], x: int) -> float:
        return float(np.interp(x, xs, vals))

    base_row = py + ph
    if stacked:
        cums = []
        running = [0.0] * len(spec.categories)
        for name in names:
            running = [running[i] + spec.series[name][i] for i in range(len(running))]
            cums.append(list(running))
        for x in range(xs[0], xs[-1] + 1):
            prev_y = base_row
            for li, name in enumerate(names):
                top = y_of(interp_vals(cums[li], x))
                draw.fill_rect(r.canvas, x, top, 1, prev_y - top, colors[name])
                prev_y = top
        for ci, cat in enumerate(spec.categories):
            prev = 0.0
            for li, name in enumerate(names):
                top_px = y_of(cums[li][ci])
                bot_px = y_of(prev)
                r.truth.layers.append(
                    {"series": name, "category": cat, "top": top_px, "bottom": bot_px,
                     "value": spec.series[name][ci], "color": list(colors[name])}
                )
                prev = cums[li][ci]
            if spec.annotated:
                label = format_value(cums[-1][ci])
                tw, _ = font.measure_text(label, 10)
                r.annotate_value(label, centers[cat] - tw // 2, y_of(cums[-1][ci]) - 14)
    else:
        order = sorted(names, key=lambda n: -sum(spec.series[n]))
        for x in range(xs[0], xs[-1] + 1):
            for name in order:
                top = y_of(interp_vals(list(spec.series[name]), x))
                draw.fill_rect(r.canvas, x, top, 1, base_row - top, colors[name])
        for ci, cat in enumerate(spec.categories):
            for name in names:
                v = spec.series[name][ci]
                r.truth.layers.append(
                    {"series": name, "category": cat, "top": y_of(v), "bottom": base_row,
                     "value": v, "color": list(colors[name])}
                )
            if spec.annotated:
                top_name = order[-1]
                label = format_value(spec.series[top_name][ci])
                tw, _ = font.measure_text(label, 10)
                r.annotate_value(label, centers[cat] - tw // 2,
                                 y_of(spec.series[top_name][ci]) - 14)
    r.draw_axis_lines(px, py, pw, ph)
    r.draw_axis_titles(
        spec.x_axis_title or r.rng.choice(X_TITLE_POOL),
        spec.y_axis_title or r.rng.choice(Y_TITLE_POOL),
        px, py, pw, ph,
    )


def _render_box(r: _Render) -> None:
    spec = r.spec
    horizontal = spec.family is GenFamily.BOX_H
    colors = _series_colors(spec, r.rng, ["box"])
    box_color = colors["box"]
    r.truth.series_colors = {"box": box_color}
    r.draw_title()
    r.draw_legend({})
    vmax = max(spec.series["max"])
    ticks = r.value_ticks(vmax)
    grid = r.rng.random() < 0.5
    stats_at = lambda i: {k: spec.series[k][i] for k in BOX_STAT_KEYS}
    if horizontal:
        px, py, pw, ph = r.plot_box(left=86)
        cols = r.draw_value_axis_x(ticks, px, py, pw, ph, grid)
        centers = r.draw_category_axis_y(px, py, pw, ph)
        tmax = ticks[-1]
        x_of = lambda v: px + int(round(v * pw / tmax))
        slot = ph / len(spec.categories)
        for ci, cat in enumerate(spec.categories):
            st = stats_at(ci)
            cy = centers[cat]
            bh = max(8, int(slot * 0.5))
            y0 = int(round(cy - bh / 2))
            xq1, xq3 = x_of(st["q1"]), x_of(st["q3"])
            xmin, xmax_ = x_of(st["min"]), x_of(st["max"])
            xmed = x_of(st["median"])
            cap = max(4, bh // 3)
            draw.fill_rect(r.canvas, xmin, cy, xq1 - xmin, 1, INK_DARK)
            draw.fill_rect(r.canvas, xq3, cy, xmax_ - xq3 + 1, 1, INK_DARK)
            draw.fill_rect(r.canvas, xmin, cy - cap, 1, 2 * cap, INK_DARK)
            draw.fill_rect(r.canvas, xmax_, cy - cap, 1, 2 * cap, INK_DARK)
            draw.fill_rect(r.canvas, xq1, y0, xq3 - xq1, bh, box_color)
            draw.fill_rect(r.canvas, xmed, y0 + 2, 2, bh - 4, INK_DARK)
            r.truth.boxes.append(
                {"category": cat, "stats": st, "color": list(box_color),
                 "box_rect": [xq1, y0, xq3 - xq1, bh],
                 "median_px": xmed, "lo_px": xmin, "hi_px": xmax_}
            )
            if spec.annotated:
                r.annotate_value(format_value(st["median"]), xmax_ + 8, cy - 5)
        r.draw_axis_lines(px, py, pw, ph)
        r.draw_axis_titles(spec.x_axis_title or r.rng.choice(Y_TITLE_POOL),
                           spec.y_axis_title or r.rng.choice(X_TITLE_POOL), px, py, pw, ph)
    else:
        px, py, pw, ph = r.plot_box()
        r.draw_value_axis_y(ticks, px, py, pw, ph, grid)
        centers = r.draw_category_axis_x(px, py, pw, ph)
        tmax = ticks[-1]
        y_of = lambda v: py + ph - int(round(v * ph / tmax))
        slot = pw / len(spec.categories)
        for ci, cat in enumerate(spec.categories):
            st = stats_at(ci)
            cx = centers[cat]
            bw = max(8, int(slot * 0.5))
            x0 = int(round(cx - bw / 2))
            yq1, yq3 = y_of(st["q1"]), y_of(st["q3"])
            ymin, ymax_ = y_of(st["min"]), y_of(st["max"])
            ymed = y_of(st["median"])
            cap = max(4, bw // 3)
            draw.fill_rect(r.canvas, cx, ymax_, 1, yq3 - ymax_, INK_DARK)
            draw.fill_rect(r.canvas, cx, yq1 + 1, 1, ymin - yq1, INK_DARK)
            draw.fill_rect(r.canvas, cx - cap, ymax_, 2 * cap, 1, INK_DARK)
            draw.fill_rect(r.canvas, cx - cap, ymin, 2 * cap, 1, INK_DARK)
            draw.fill_rect(r.canvas, x0, yq3, bw, yq1 - yq3, box_color)
            draw.fill_rect(r.canvas, x0 + 2, ymed, bw - 4, 2, INK_DARK)
            r.truth.boxes.append(
                {"category": cat, "stats": st, "color": list(box_color),
                 "box_rect": [x0, yq3, bw, yq1 - yq3],
                 "median_px": ymed, "lo_px": ymin, "hi_px": ymax_}
            )
            if spec.annotated:
                label = format_value(st["median"])
                tw, _ = font.measure_text(label, 10)
                r.annotate_value(label, cx - tw // 2, ymax_ - 14)
        r.draw_axis_lines(px, py, pw, ph)
        r.draw_axis_titles(spec.x_axis_title or r.rng.choice(X_TITLE_POOL),
                           spec.y_axis_title or r.rng.choice(Y_TITLE_POOL), px, py, pw, ph)


def _render_scatter(r: _Render) -> None:
    spec = r.spec
    names = list(spec.series)
    colors = _series_colors(spec, r.rng, names)
    r.truth.series_colors = {k: colors[k] for k in names}
    r.draw_title()
    r.draw_legend(colors)
    vmax = max(max(vs) for vs in spec.series.values())
    ticks = r.value_ticks(vmax)
    px, py, pw, ph = r.plot_box()
    r.draw_value_axis_y(ticks, px, py, pw, ph, r.rng.random() < 0.5)
    tmax = ticks[-1]
    y_of = lambda v: py + ph - int(round(v * ph / tmax))
    placed: list[tuple[int, int]] = []
    radius = 3
    for name in names:
        for v in spec.series[name]:
            for _ in range(200):
                x = r.rng.randint(px + 14, px + pw - 14)
                y = y_of(v)
                if all((x - qx) ** 2 + (y - qy) ** 2 >= (4 * radius) ** 2 for qx, qy in placed):
                    break
            placed.append((x, y))
            draw.fill_disc(r.canvas, x, y, radius, colors[name])
            r.truth.points.append(
                {"series": name, "category": None, "x": x, "y": y, "value": v,
                 "color": list(colors[name])}
            )
            if spec.annotated:
                r.annotate_value(format_value(v), x + 6, y - 12)
    r.draw_axis_lines(px, py, pw, ph)
    r.draw_axis_titles(spec.x_axis_title or "X", spec.y_axis_title or r.rng.choice(Y_TITLE_POOL),
                       px, py, pw, ph)


def _render_radial(r: _Render) -> None:
    spec = r.spec
    cats = list(spec.categories)
    values = next(iter(spec.series.values()))
    ref = spec.reference_value
    colors = _series_colors(spec, r.rng, cats)
    r.truth.series_colors = {c: colors[c] for c in cats}
    r.draw_title()
    r.draw_legend(colors)
    px, py, pw, ph = r.plot_box(left=40, right=40, bottom=30)
    cx = px + pw / 2
    cy = py + ph / 2
    r_ref = min(pw, ph) / 2 - 18
    ring_radii = [r_ref * f for f in (0.25, 0.5, 0.75, 1.0)]
    for rr in ring_radii:
        draw.circle_outline(r.canvas, cx, cy, rr, RING_COLOR, thickness=1)
    n = len(cats)
    gap = 0.05 * draw.TAU / n
    wedges = []
    for i, (cat, v) in enumerate(zip(cats, values)):
        a0 = i * draw.TAU / n + gap
        a1 = (i + 1) * draw.TAU / n - gap
        rv = r_ref * v / ref
        draw.fill_wedge(r.canvas, cx, cy, 4.0, rv, a0, a1, colors[cat])
        wedges.append({"category": cat, "value": v, "a0": a0, "a1": a1,
                       "r_px": rv, "color": list(colors[cat])})
        if spec.annotated:
            mid = (a0 + a1) / 2
            label = format_value(v)
            tw, th = font.measure_text(label, 10)
            lx = cx + (rv + 8) * math.sin(mid) - tw // 2
            ly = cy - (rv + 8) * math.cos(mid) - th // 2
            r.annotate_value(label, int(lx), int(ly))
    r.truth.radial = {
        "center": [cx, cy],
        "ring_radii": ring_radii,
        "reference_value": ref,
        "wedges": wedges,
    }


# ---------------------------------------------------------------------------
# QA factory


def _qa_for(truth: GroundTruth, rng: random.Random) -> list[QASample]:
    spec = truth.spec
    fam = spec.family
    cats = list(spec.categories)
    samples: list[tuple[str, str, QAType]] = []

    def lookup_query(series: str, cat: str) -> str:
        if len(spec.series) > 1:
            return f"What is the value of {series} at {cat}?"
        return f"What is the value at {cat}?"

    if fam in (GenFamily.BAR_V, GenFamily.BAR_H, GenFamily.BAR_GROUPED, GenFamily.BAR_STACKED,
               GenFamily.LINE_SINGLE, GenFamily.LINE_MULTI, GenFamily.AREA_OVERLAY,
               GenFamily.AREA_STACKED):
        names = list(spec.series)
        s = rng.choice(names)
        c = rng.choice(cats)
        samples.append((lookup_query(s, c), format_value(truth.value(s, c)), QAType.NUMERIC))
        s2 = rng.choice(names)
        pair = rng.sample(range(len(cats)), 2)
        va, vb = spec.series[s2][pair[0]], spec.series[s2][pair[1]]
        if va < vb:
            pair = [pair[1], pair[0]]
            va, vb = vb, va
        a_name, b_name = cats[pair[0]], cats[pair[1]]
        if rng.random() < 0.15 and len(names) >= 2 and fam in (GenFamily.BAR_GROUPED,
                                                               GenFamily.LINE_MULTI):
            sa, sb = rng.sample(names, 2)
            cc = rng.choice(cats)
            winner = sa if truth.value(sa, cc) >= truth.value(sb, cc) else sb
            samples.append(
                (f"Which has the greater value at {cc}: {sa} or {sb}?", winner,
                 QAType.VALUE_COMPARISON)
            )
        else:
            if len(spec.series) > 1:
                q = f"By how much does the value of {s2} at {a_name} exceed its value at {b_name}?"
            else:
                q = f"By how much does the value at {a_name} exceed the value at {b_name}?"
            samples.append((q, format_value(va - vb), QAType.NUMERIC))
    elif fam in (GenFamily.PIE_SECTOR, GenFamily.PIE_RING):
        picks = rng.sample(cats, min(2, len(cats)))
        for c in picks:
            frac = next(s["fraction"] for s in truth.slices if s["category"] == c)
            samples.append(
                (f"What percentage of the whole does {c} represent?", f"{frac * 100:.1f}",
                 QAType.NUMERIC)
            )
    elif fam in (GenFamily.BOX_V, GenFamily.BOX_H):
        for entity in rng.sample(["median", "max", "min", "iqr", "range"], 2):
            c = rng.choice(cats)
            st = next(b["stats"] for b in truth.boxes if b["category"] == c)
            if entity == "iqr":
                v = st["q3"] - st["q1"]
            elif entity == "range":
                v = st["max"] - st["min"]
            else:
                v = st[entity]
            label = {"iqr": "interquartile range", "range": "range"}.get(entity, entity)
            samples.append(
                (f"What is the {label} of the box at {c}?", format_value(v), QAType.NUMERIC)
            )
    elif fam is GenFamily.SCATTER:
        name = rng.choice(list(spec.series))
        n_pts = len(spec.series[name])
        samples.append(
            (f"How many {name} points does the chart contain?", str(n_pts), QAType.NUMERIC)
        )
    elif fam is GenFamily.RADIAL:
        for c in rng.sample(cats, min(2, len(cats))):
            v = truth.value(next(iter(spec.series)), c)
            samples.append(
                (
                    f"What is the value of {c} if the outer ring represents "
                    f"{format_value(spec.reference_value)}?",
                    format_value(v),
                    QAType.NUMERIC,
                )
            )
    qa = [
        QASample(image_ref="", query=q, ground_truth=gt, qa_type=t)
        for q, gt, t in samples
    ]
    return qa


# ---------------------------------------------------------------------------
# public API


_RENDERERS = {
    GenFamily.BAR_V: _render_bars,
    GenFamily.BAR_H: _render_bars,
    GenFamily.BAR_GROUPED: _render_bars,
    GenFamily.BAR_STACKED: _render_bars,
    GenFamily.LINE_SINGLE: _render_lines,
    GenFamily.LINE_MULTI: _render_lines,
    GenFamily.PIE_SECTOR: _render_pie,
    GenFamily.PIE_RING: _render_pie,
    GenFamily.AREA_OVERLAY: _render_area,
    GenFamily.AREA_STACKED: _render_area,
    GenFamily.BOX_V: _render_box,
    GenFamily.BOX_H: _render_box,
    GenFamily.SCATTER: _render_scatter,
    GenFamily.RADIAL: _render_radial,
}


def gen_chart(spec: ChartSpec, seed: int) -> tuple[RasterImage, GroundTruth, list[QASample]]:
    """Render one chart. Deterministic: same (spec, seed) gives identical bytes."""
    r = _Render(spec, seed)
    _RENDERERS[spec.family](r)
    r.draw_deferred_legend()
    r.finish_metadata()
    image = RasterImage.from_rgb(r.canvas)
    qa_rng = random.Random((seed & 0xFFFFFFFF) * 7_368_787 + spec.style_seed)
    qa = _qa_for(r.truth, qa_rng)
    return image, r.truth, qa


def _round_to(v: float, quantum: float) -> float:
    return round(round(v / quantum) * quantum, 10)


def random_spec(family: GenFamily, rng: random.Random, annotated: bool,
                style_seed: int) -> ChartSpec:
    """Draw a plausible spec for one family. Values keep 5%-resolvable headroom."""
    scale = rng.choice([10.0, 100.0, 1000.0])
    quantum = scale / 100.0
    cat_pool = rng.choice(CATEGORY_POOLS)
    if family in (GenFamily.PIE_SECTOR, GenFamily.PIE_RING):
        n = rng.randint(3, min(6, len(cat_pool)))
        cats = list(cat_pool[:n])
        fracs = [rng.uniform(0.12, 1.0) for _ in range(n)]
        total = sum(fracs)
        fracs = [max(0.10, f / total) for f in fracs]
        total = sum(fracs)
        fracs = [f / total for f in fracs]
        values = [round(f * scale, 2) for f in fracs]
        series = {"share": values}
    elif family is GenFamily.RADIAL:
        n = rng.randint(4, min(7, len(cat_pool)))
        cats = list(cat_pool[:n])
        series = {"value": [_round_to(rng.uniform(30, 95), 1.0) for _ in range(n)]}
        scale = 100.0
    elif family in (GenFamily.BOX_V, GenFamily.BOX_H):
        n = rng.randint(3, min(5, len(cat_pool)))
        cats = list(cat_pool[:n])
        stats = {k: [] for k in BOX_STAT_KEYS}
        for _ in range(n):
            med = rng.uniform(0.35, 0.75) * scale
            iqr = rng.uniform(0.18, 0.30) * scale
            lo = rng.uniform(0.08, 0.14) * scale
            hi = rng.uniform(0.08, 0.14) * scale
            q1, q3 = med - iqr / 2, med + iqr / 2
            stats["min"].append(_round_to(q1 - lo, quantum))
            stats["q1"].append(_round_to(q1, quantum))
            stats["median"].append(_round_to(med, quantum))
            stats["q3"].append(_round_to(q3, quantum))
            stats["max"].append(_round_to(q3 + hi, quantum))
        series = stats
    elif family is GenFamily.SCATTER:
        cats = []
        n = rng.randint(8, 14)
        series = {"Sample": [_round_to(rng.uniform(0.15, 0.95) * scale, quantum)
                             for _ in range(n)]}
    else:
        n = rng.randint(4, min(6, len(cat_pool)))
        cats = list(cat_pool[:n])
        if family in (GenFamily.BAR_GROUPED, GenFamily.LINE_MULTI, GenFamily.AREA_STACKED,
                      GenFamily.BAR_STACKED):
            k = rng.randint(2, 3)
        elif family is GenFamily.AREA_OVERLAY:
            k = 2
        else:
            k = 1
        pool = rng.choice(SERIES_POOLS)
        names = list(pool[:k]) if k > 1 else [pool[0]]
        series = {}
        lo, hi = (0.25, 0.95) if family not in (GenFamily.BAR_STACKED, GenFamily.AREA_STACKED) else (0.18, 0.5)
        if family is GenFamily.LINE_MULTI and k >= 2:
            # disjoint value bands keep multi-line strokes from crossing
            bands = {2: [(0.25, 0.52), (0.64, 0.92)],
                     3: [(0.2, 0.38), (0.46, 0.64), (0.72, 0.92)]}[k]
            for name, (blo, bhi) in zip(names, bands):
                series[name] = [_round_to(rng.uniform(blo, bhi) * scale, quantum)
                                for _ in range(n)]
        else:
            for name in names:
                series[name] = [_round_to(rng.uniform(lo, hi) * scale, quantum)
                                for _ in range(n)]
        if family is GenFamily.AREA_OVERLAY:
            base = series[names[0]]
            series[names[1]] = [_round_to(v * rng.uniform(0.35, 0.7), quantum) for v in base]
        # keep differences resolvable under the 5% judge
        for name in names:
            vals = series[name]
            for i in range(len(vals)):
                if vals[i] < 0.12 * scale:
                    vals[i] = _round_to(0.12 * scale + quantum, quantum)
            series[name] = vals
    return ChartSpec(
        family=family,
        series={k: tuple(v) for k, v in series.items()},
        categories=tuple(cats),
        annotated=annotated,
        style_seed=style_seed,
        palette=(),
    )


def gen_suite(
    families: list[GenFamily | str],
    n_per_family: int,
    seed: int,
    out_dir: str | Path,
) -> Path:
    """Generate a dataset directory: charts/, truth/, qa.jsonl, manifest.json.

    Exactly round(0.3 * n) charts per family are annotated; the rest are not.
    """
    if n_per_family < 1:
        raise InvalidSpec("n_per_family must be >= 1")
    out = Path(out_dir)
    (out / "charts").mkdir(parents=True, exist_ok=True)
    (out / "truth").mkdir(parents=True, exist_ok=True)
    all_qa = []
    manifest: dict[str, Any] = {"seed": seed, "n_per_family": n_per_family, "charts": []}
    rng = random.Random(seed)
    for fam in [GenFamily(f) for f in families]:
        n_annotated = n_per_family - round(0.7 * n_per_family)
        for i in range(n_per_family):
            annotated = i < n_annotated
            style_seed = rng.randrange(2**31)
            spec = random_spec(fam, rng, annotated, style_seed)
            chart_id = f"{fam.value}-{i:04d}"
            image, truth, qa = gen_chart(spec, seed)
            img_rel = f"charts/{chart_id}.png"
            image.save_png(out / img_rel)
            truth_rel = f"truth/{chart_id}.json"
            (out / truth_rel).write_text(json.dumps(truth.to_dict(), sort_keys=True))
            for j, s in enumerate(qa):
                all_qa.append(
                    replace(
                        s,
                        image_ref=img_rel,
                        sample_id=f"{chart_id}-q{j}",
                        extras={
                            "family": fam.value,
                            "annotation_status": "annotated" if annotated else "unannotated",
                            "truth": truth_rel,
                        },
                    )
                )
            manifest["charts"].append(
                {
                    "id": chart_id,
                    "family": fam.value,
                    "annotated": annotated,
                    "image": img_rel,
                    "truth": truth_rel,
                    "image_sha256": hashlib.sha256((out / img_rel).read_bytes()).hexdigest(),
                    "truth_sha256": hashlib.sha256((out / truth_rel).read_bytes()).hexdigest(),
                }
            )
    from .model import save_qa_dataset

    save_qa_dataset(all_qa, out / "qa.jsonl")
    manifest["qa_sha256"] = hashlib.sha256((out / "qa.jsonl").read_bytes()).hexdigest()
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return out
