"""Hard-edged drawing primitives shared by the chart renderer and tool overlays.

All functions mutate an (H, W, 3) uint8 canvas in place. Nothing here is
anti-aliased, so pixel counts stay exact and renders are byte-reproducible.
"""

from __future__ import annotations

import math

import numpy as np

from . import font

TAU = 2.0 * math.pi


def fill_rect(canvas: np.ndarray, x: int, y: int, w: int, h: int, color) -> None:
    H, W = canvas.shape[:2]
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(W, x + w), min(H, y + h)
    if x0 < x1 and y0 < y1:
        canvas[y0:y1, x0:x1] = color


def rect_outline(canvas: np.ndarray, x: int, y: int, w: int, h: int, color, thickness: int = 1) -> None:
    t = thickness
    fill_rect(canvas, x, y, w, t, color)
    fill_rect(canvas, x, y + h - t, w, t, color)
    fill_rect(canvas, x, y, t, h, color)
    fill_rect(canvas, x + w - t, y, t, h, color)


def _disc_window(canvas: np.ndarray, cx: float, cy: float, r: float):
    H, W = canvas.shape[:2]
    x0 = max(0, int(math.floor(cx - r - 1)))
    x1 = min(W, int(math.ceil(cx + r + 2)))
    y0 = max(0, int(math.floor(cy - r - 1)))
    y1 = min(H, int(math.ceil(cy + r + 2)))
    yy, xx = np.mgrid[y0:y1, x0:x1]
    return x0, y0, x1, y1, xx - cx, yy - cy


def fill_disc(canvas: np.ndarray, cx: float, cy: float, r: float, color) -> None:
    x0, y0, x1, y1, dx, dy = _disc_window(canvas, cx, cy, r)
    if x0 >= x1 or y0 >= y1:
        return
    sel = dx * dx + dy * dy <= r * r
    canvas[y0:y1, x0:x1][sel] = color


def circle_outline(canvas: np.ndarray, cx: float, cy: float, r: float, color, thickness: int = 1) -> None:
    x0, y0, x1, y1, dx, dy = _disc_window(canvas, cx, cy, r)
    if x0 >= x1 or y0 >= y1:
        return
    d2 = dx * dx + dy * dy
    inner = max(0.0, r - thickness)
    sel = (d2 <= r * r) & (d2 > inner * inner)
    canvas[y0:y1, x0:x1][sel] = color


def clock_angle(dx: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Angle in [0, tau) measured clockwise from 12 o'clock (screen up)."""
    a = np.arctan2(dx, -dy)
    return np.mod(a, TAU)


def fill_wedge(
    canvas: np.ndarray,
    cx: float,
    cy: float,
    r_inner: float,
    r_outer: float,
    a0: float,
    a1: float,
    color,
) -> np.ndarray:
    """Fill the annular wedge with angles in [a0, a1) clockwise from 12 o'clock.

    Returns the boolean mask of painted pixels (window-local coordinates are
    not exposed; the mask is full-canvas sized).
    """
    H, W = canvas.shape[:2]
    x0, y0, x1, y1, dx, dy = _disc_window(canvas, cx, cy, r_outer)
    full = np.zeros((H, W), dtype=bool)
    if x0 >= x1 or y0 >= y1:
        return full
    d2 = dx * dx + dy * dy
    radial = (d2 <= r_outer * r_outer) & (d2 >= r_inner * r_inner)
    ang = clock_angle(dx, dy)
    a0m = a0 % TAU
    a1m = a1 % TAU
    if a1 - a0 >= TAU - 1e-12:
        angular = np.ones_like(ang, dtype=bool)
    elif a0m <= a1m:
        angular = (ang >= a0m) & (ang < a1m)
    else:
        angular = (ang >= a0m) | (ang < a1m)
    sel = radial & angular
    canvas[y0:y1, x0:x1][sel] = color
    full[y0:y1, x0:x1] = sel
    return full


def draw_segment(canvas: np.ndarray, p0, p1, color, thickness: int = 1) -> None:
    """Paint pixels within thickness/2 of the segment p0-p1 (inclusive caps)."""
    H, W = canvas.shape[:2]
    x0f, y0f = float(p0[0]), float(p0[1])
    x1f, y1f = float(p1[0]), float(p1[1])
    half = thickness / 2.0
    bx0 = max(0, int(math.floor(min(x0f, x1f) - half - 1)))
    bx1 = min(W, int(math.ceil(max(x0f, x1f) + half + 2)))
    by0 = max(0, int(math.floor(min(y0f, y1f) - half - 1)))
    by1 = min(H, int(math.ceil(max(y0f, y1f) + half + 2)))
    if bx0 >= bx1 or by0 >= by1:
        return
    yy, xx = np.mgrid[by0:by1, bx0:bx1]
    vx, vy = x1f - x0f, y1f - y0f
    seg_len2 = vx * vx + vy * vy
    if seg_len2 == 0:
        d2 = (xx - x0f) ** 2 + (yy - y0f) ** 2
    else:
        t = ((xx - x0f) * vx + (yy - y0f) * vy) / seg_len2
        t = np.clip(t, 0.0, 1.0)
        d2 = (xx - (x0f + t * vx)) ** 2 + (yy - (y0f + t * vy)) ** 2
    sel = d2 <= half * half
    canvas[by0:by1, bx0:bx1][sel] = color


def draw_polyline(canvas: np.ndarray, points, color, thickness: int = 1) -> None:
    for a, b in zip(points, points[1:]):
        draw_segment(canvas, a, b, color, thickness)


def dim(canvas: np.ndarray, factor: float = 0.35) -> np.ndarray:
    """Return a dimmed copy (toward white) for highlight visualizations."""
    out = canvas.astype(np.float32)
    out = out * (1.0 - factor) + 255.0 * factor
    return out.astype(np.uint8)


def mask_contour_bits(bits: np.ndarray) -> np.ndarray:
    """Boundary pixels of a mask: set bits with a missing 4-neighbor."""
    padded = np.pad(bits, 1, mode="constant")
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return bits & ~interior


def draw_mask_contour(canvas: np.ndarray, bits: np.ndarray, color, thickness: int = 1) -> None:
    edge = mask_contour_bits(bits)
    if thickness > 1:
        import cv2

        kernel = np.ones((thickness, thickness), dtype=np.uint8)
        edge = cv2.dilate(edge.astype(np.uint8), kernel) > 0
    canvas[edge] = color


def label_at(canvas: np.ndarray, x: int, y: int, text: str, size: int = 14) -> None:
    """Draw a black numeric label with a 1-px white halo, clamped to the canvas."""
    w, h = font.measure_text(text, size)
    H, W = canvas.shape[:2]
    x = int(np.clip(x - w // 2, 1, max(1, W - w - 1)))
    y = int(np.clip(y - h // 2, 1, max(1, H - h - 1)))
    font.render_text(canvas, x, y, text, size, (0, 0, 0), halo=(255, 255, 255))


def marker_cross(canvas: np.ndarray, x: int, y: int, color, arm: int = 5) -> None:
    draw_segment(canvas, (x - arm, y), (x + arm, y), color, 1)
    draw_segment(canvas, (x, y - arm), (x, y + arm), color, 1)
