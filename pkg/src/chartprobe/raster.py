"""Deterministic pixel-level operations every perception tool builds on."""

from __future__ import annotations

import numpy as np
import cv2

from .errors import EmptyRegion, OutOfBounds
from .model import BBox, BinaryMap, RasterImage, RgbColor, SegmentMask

DEFAULT_COLOR_TOLERANCE = 30.0
BACKGROUND_TOLERANCE = 30.0


def color_distance_sq(rgb: np.ndarray, target: RgbColor) -> np.ndarray:
    diff = rgb.astype(np.int32) - np.array(target.as_tuple(), dtype=np.int32)
    return (diff * diff).sum(axis=-1)


def color_mask(image: RasterImage, target: RgbColor, tolerance: float = DEFAULT_COLOR_TOLERANCE) -> BinaryMap:
    """Bits set where the Euclidean RGB distance to `target` is <= tolerance."""
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    d2 = color_distance_sq(image.rgb(), target)
    return BinaryMap.from_bits(d2 <= tolerance * tolerance)


def connected_components(
    bmap: BinaryMap, min_area: int = 0, image: RasterImage | None = None
) -> list[SegmentMask]:
    """8-connected components with tight bboxes, labeled 1..N in reading order.

    Components below `min_area` are dropped. Mean colors are taken from
    `image` when provided.
    """
    if min_area < 0:
        raise ValueError("min_area must be >= 0")
    n, labels, stats, _ = cv2.connectedComponentsWithStats(
        bmap.bits.astype(np.uint8), connectivity=8
    )
    comps: list[tuple[int, int, SegmentMask]] = []
    for lbl in range(1, n):
        x, y, w, h, area = (int(v) for v in stats[lbl])
        if area < min_area:
            continue
        bits = labels == lbl
        mask = SegmentMask.from_bits(1, bits, image)
        comps.append((y, x, mask))
    comps.sort(key=lambda t: (t[0], t[1]))
    return [m.relabeled(i + 1) for i, (_, _, m) in enumerate(comps)]


def estimate_background(image: RasterImage) -> RgbColor:
    """Modal color of the 1-px border ring."""
    rgb = image.rgb()
    if image.height == 1 or image.width == 1:
        ring = rgb.reshape(-1, 3)
    else:
        ring = np.concatenate(
            [
                rgb[0, :, :],
                rgb[-1, :, :],
                rgb[1:-1, 0, :],
                rgb[1:-1, -1, :],
            ]
        )
    return _modal_color(ring)


def _modal_color(pixels: np.ndarray) -> RgbColor:
    packed = (
        pixels[:, 0].astype(np.uint32) << 16
    ) | (pixels[:, 1].astype(np.uint32) << 8) | pixels[:, 2].astype(np.uint32)
    vals, counts = np.unique(packed, return_counts=True)
    # ties break toward the smaller packed value for determinism
    best = vals[counts == counts.max()].min()
    return RgbColor(int(best >> 16) & 255, int(best >> 8) & 255, int(best) & 255)


def dominant_color(
    image: RasterImage, bbox: BBox, background: RgbColor | None = None
) -> RgbColor:
    """Modal color over `bbox` after excluding background-matching pixels."""
    if not bbox.within(image.width, image.height):
        raise OutOfBounds(f"bbox {bbox.as_tuple()} outside image")
    if background is None:
        background = estimate_background(image)
    region = image.rgb()[bbox.y : bbox.y2, bbox.x : bbox.x2].reshape(-1, 3)
    keep = color_distance_sq(region, background) > BACKGROUND_TOLERANCE**2
    fg = region[keep]
    if fg.size == 0:
        raise EmptyRegion(f"all pixels in {bbox.as_tuple()} match the background")
    return _modal_color(fg)


def crop(image: RasterImage, bbox: BBox) -> RasterImage:
    return image.crop(bbox)


def iou(a: BBox | BinaryMap | SegmentMask, b: BBox | BinaryMap | SegmentMask) -> float:
    """Intersection over union in [0, 1] for boxes or bit grids."""
    if isinstance(a, SegmentMask):
        a = a.bitmap
    if isinstance(b, SegmentMask):
        b = b.bitmap
    if isinstance(a, BBox) and isinstance(b, BBox):
        ix = max(0, min(a.x2, b.x2) - max(a.x, b.x))
        iy = max(0, min(a.y2, b.y2) - max(a.y, b.y))
        inter = ix * iy
        union = a.w * a.h + b.w * b.h - inter
        return inter / union if union else 0.0
    if isinstance(a, BinaryMap) and isinstance(b, BinaryMap):
        if (a.width, a.height) != (b.width, b.height):
            raise ValueError("bit grids must share dimensions")
        inter = int(np.logical_and(a.bits, b.bits).sum())
        union = int(np.logical_or(a.bits, b.bits).sum())
        return inter / union if union else 0.0
    raise TypeError("iou arguments must both be BBox or both be bit grids")


def union_bits(masks: list[SegmentMask]) -> BinaryMap:
    if not masks:
        raise ValueError("need at least one mask")
    bits = np.zeros_like(masks[0].bitmap.bits)
    for m in masks:
        bits = np.logical_or(bits, m.bitmap.bits)
    return BinaryMap.from_bits(bits)
