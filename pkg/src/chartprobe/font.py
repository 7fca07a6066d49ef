"""Embedded bitmap font used by the chart renderer and the text recognizer.

Glyphs are authored on a 5x9 master grid (7 body rows, 2 descender rows) and
rasterized by nearest-neighbor upscaling to the four supported pixel sizes.
Rendering is hard-edged (no anti-aliasing), which keeps recognition an exact
bitmap-equality problem.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SIZES = (10, 12, 14, 18)

MASTER_W = 5
MASTER_H = 9  # rows 0..6 body, rows 7..8 descender

# fmt: off
GLYPHS: dict[str, tuple[str, ...]] = {
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###.", ".....", "....."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###.", ".....", "....."),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####", ".....", "....."),
    "3": (".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###.", ".....", "....."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#.", ".....", "....."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###.", ".....", "....."),
    "6": ("..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###.", ".....", "....."),
    "7": ("#####", "....#", "...#.", "..#..", "..#..", "..#..", "..#..", ".....", "....."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###.", ".....", "....."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##..", ".....", "....."),
    "A": (".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#", ".....", "....."),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####.", ".....", "....."),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###.", ".....", "....."),
    "D": ("####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####.", ".....", "....."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####", ".....", "....."),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#....", ".....", "....."),
    "G": (".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".###.", ".....", "....."),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#", ".....", "....."),
    "I": (".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###.", ".....", "....."),
    "J": ("..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##..", ".....", "....."),
    "K": ("#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#", ".....", "....."),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####", ".....", "....."),
    "M": ("#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#", ".....", "....."),
    "N": ("#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#", ".....", "....."),
    "O": (".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###.", ".....", "....."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#....", ".....", "....."),
    "Q": (".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#", ".....", "....."),
    "R": ("####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#", ".....", "....."),
    "S": (".####", "#....", "#....", ".###.", "....#", "....#", "####.", ".....", "....."),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#..", ".....", "....."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###.", ".....", "....."),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#..", ".....", "....."),
    "W": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#", ".....", "....."),
    "X": ("#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#", ".....", "....."),
    "Y": ("#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#..", ".....", "....."),
    "Z": ("#####", "....#", "...#.", "..#..", ".#...", "#....", "#####", ".....", "....."),
    "a": (".....", ".....", ".###.", "....#", ".####", "#...#", ".####", ".....", "....."),
    "b": ("#....", "#....", "####.", "#...#", "#...#", "#...#", "####.", ".....", "....."),
    "c": (".....", ".....", ".###.", "#....", "#....", "#...#", ".###.", ".....", "....."),
    "d": ("....#", "....#", ".####", "#...#", "#...#", "#...#", ".####", ".....", "....."),
    "e": (".....", ".....", ".###.", "#...#", "#####", "#....", ".###.", ".....", "....."),
    "f": ("..##.", ".#..#", ".#...", "###..", ".#...", ".#...", ".#...", ".....", "....."),
    "g": (".....", ".....", ".####", "#...#", "#...#", "#...#", ".####", "....#", ".###."),
    "h": ("#....", "#....", "####.", "#...#", "#...#", "#...#", "#...#", ".....", "....."),
    "i": ("..#..", ".....", ".##..", "..#..", "..#..", "..#..", ".###.", ".....", "....."),
    "j": ("...#.", ".....", "..##.", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."),
    "k": ("#....", "#....", "#..#.", "#.#..", "##...", "#.#..", "#..#.", ".....", "....."),
    "l": (".##..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###.", ".....", "....."),
    "m": (".....", ".....", "##.#.", "#.#.#", "#.#.#", "#.#.#", "#.#.#", ".....", "....."),
    "n": (".....", ".....", "####.", "#...#", "#...#", "#...#", "#...#", ".....", "....."),
    "o": (".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###.", ".....", "....."),
    "p": (".....", ".....", "####.", "#...#", "#...#", "#...#", "####.", "#....", "#...."),
    "q": (".....", ".....", ".####", "#...#", "#...#", "#...#", ".####", "....#", "....#"),
    "r": (".....", ".....", "#.##.", "##..#", "#....", "#....", "#....", ".....", "....."),
    "s": (".....", ".....", ".####", "#....", ".###.", "....#", "####.", ".....", "....."),
    "t": (".#...", ".#...", "###..", ".#...", ".#...", ".#..#", "..##.", ".....", "....."),
    "u": (".....", ".....", "#...#", "#...#", "#...#", "#..##", ".##.#", ".....", "....."),
    "v": (".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#..", ".....", "....."),
    "w": (".....", ".....", "#...#", "#...#", "#.#.#", "#.#.#", ".#.#.", ".....", "....."),
    "x": (".....", ".....", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", ".....", "....."),
    "y": (".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#..", ".#...", "#...."),
    "z": (".....", ".....", "#####", "...#.", "..#..", ".#...", "#####", ".....", "....."),
    ".": (".....", ".....", ".....", ".....", ".....", ".##..", ".##..", ".....", "....."),
    ",": (".....", ".....", ".....", ".....", ".....", ".##..", ".##..", "..#..", "....."),
    "-": (".....", ".....", ".....", "#####", ".....", ".....", ".....", ".....", "....."),
    "+": (".....", "..#..", "..#..", "#####", "..#..", "..#..", ".....", ".....", "....."),
    "%": ("##...", "##..#", "...#.", "..#..", ".#...", "#..##", "...##", ".....", "....."),
    "$": ("..#..", ".####", "#.#..", ".###.", "..#.#", "####.", "..#..", ".....", "....."),
    "(": ("...#.", "..#..", ".#...", ".#...", ".#...", "..#..", "...#.", ".....", "....."),
    ")": (".#...", "..#..", "...#.", "...#.", "...#.", "..#..", ".#...", ".....", "....."),
    "/": ("....#", "....#", "...#.", "..#..", ".#...", "#....", "#....", ".....", "....."),
    ":": (".....", ".##..", ".##..", ".....", ".##..", ".##..", ".....", ".....", "....."),
    "!": ("..#..", "..#..", "..#..", "..#..", "..#..", ".....", "..#..", ".....", "....."),
    "?": (".###.", "#...#", "....#", "...#.", "..#..", ".....", "..#..", ".....", "....."),
    "'": ("..#..", "..#..", ".....", ".....", ".....", ".....", ".....", ".....", "....."),
    "&": (".##..", "#..#.", "#.#..", ".#...", "#.#.#", "#..#.", ".##.#", ".....", "....."),
    "_": (".....", ".....", ".....", ".....", ".....", ".....", "#####", ".....", "....."),
    "=": (".....", ".....", "#####", ".....", "#####", ".....", ".....", ".....", "....."),
}
# fmt: on

CHARSET = frozenset(GLYPHS) | {" "}


def cell_width(size: int) -> int:
    return max(4, round(size * MASTER_W / MASTER_H))


def spacing(size: int) -> int:
    return max(1, size // MASTER_H)


def advance(size: int) -> int:
    return cell_width(size) + spacing(size)


@lru_cache(maxsize=None)
def _master(char: str) -> np.ndarray:
    rows = GLYPHS[char]
    if len(rows) != MASTER_H or any(len(r) != MASTER_W for r in rows):
        raise ValueError(f"bad master grid for {char!r}")
    return np.array([[c == "#" for c in row] for row in rows], dtype=bool)


@lru_cache(maxsize=None)
def glyph_bitmap(char: str, size: int) -> np.ndarray:
    """Glyph cell bitmap of shape (size, cell_width(size)), read-only."""
    m = _master(char)
    w = cell_width(size)
    rows = (np.arange(size) * MASTER_H // size).astype(int)
    cols = (np.arange(w) * MASTER_W // w).astype(int)
    bm = m[np.ix_(rows, cols)]
    bm.setflags(write=False)
    return bm


@lru_cache(maxsize=None)
def glyph_ink_extent(char: str, size: int) -> tuple[int, int, int, int] | None:
    """(top, bottom_excl, left, right_excl) of set pixels within the cell."""
    bm = glyph_bitmap(char, size)
    if not bm.any():
        return None
    rows = np.flatnonzero(bm.any(axis=1))
    cols = np.flatnonzero(bm.any(axis=0))
    return int(rows[0]), int(rows[-1] + 1), int(cols[0]), int(cols[-1] + 1)


def measure_text(text: str, size: int) -> tuple[int, int]:
    """Full cell-box extent (width, height) of a rendered string."""
    if not text:
        return (0, size)
    return (len(text) * advance(size) - spacing(size), size)


def text_ink_height(text: str, size: int) -> tuple[int, int]:
    """(top offset, ink height) of the string relative to the cell top."""
    tops, bots = [], []
    for ch in text:
        ext = glyph_ink_extent(ch, size) if ch != " " else None
        if ext is not None:
            tops.append(ext[0])
            bots.append(ext[1])
    if not tops:
        return (0, size)
    return (min(tops), max(bots) - min(tops))


def digit_ink_height(size: int) -> int:
    return text_ink_height("0", size)[1]


def render_text(
    canvas: np.ndarray,
    x: int,
    y: int,
    text: str,
    size: int,
    color: tuple[int, int, int],
    halo: tuple[int, int, int] | None = None,
) -> None:
    """Stamp `text` on an (H, W, 3) uint8 canvas with the cell top-left at (x, y).

    Clips silently at canvas edges. A halo paints the glyph's 8-neighborhood
    first so labels stay legible on busy backgrounds.
    """
    h, w = canvas.shape[:2]
    adv = advance(size)
    cw = cell_width(size)
    cx = x
    for ch in text:
        if ch == " " or ch not in GLYPHS:
            cx += adv
            continue
        bm = glyph_bitmap(ch, size)
        if halo is not None:
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    if dx == 0 and dy == 0:
                        continue
                    _stamp(canvas, bm, cx + dx, y + dy, halo, h, w, cw, size)
        _stamp(canvas, bm, cx, y, color, h, w, cw, size)
        cx += adv


def _stamp(canvas, bm, x, y, color, h, w, cw, size) -> None:
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(w, x + cw), min(h, y + size)
    if x0 >= x1 or y0 >= y1:
        return
    sub = bm[y0 - y : y1 - y, x0 - x : x1 - x]
    region = canvas[y0:y1, x0:x1]
    region[sub] = color


def render_text_block(text: str, size: int) -> np.ndarray:
    """Standalone boolean bitmap of the rendered string (one line)."""
    w, h = measure_text(text, size)
    if w == 0:
        return np.zeros((size, 1), dtype=bool)
    canvas = np.zeros((h, w, 3), dtype=np.uint8)
    render_text(canvas, 0, 0, text, size, (255, 255, 255))
    return canvas[:, :, 0] > 0
