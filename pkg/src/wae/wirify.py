"""Rendering screens into wireframe rasters.

A wireframe is a white canvas with one filled rectangle per component.
Three representation modes distinguish component types: grey levels,
distinct hues, or hues overlaid with a per-type texture pattern.
"""

from __future__ import annotations

import colorsys
import math
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ComponentType, UIScreen

TENSOR_MAGIC = b"WFIMG1"


class RepresentationMode(Enum):
    Grey = "grey"
    Color = "color"
    Texture = "texture"

    @property
    def channels(self) -> int:
        return 1 if self is RepresentationMode.Grey else 3


@dataclass(frozen=True)
class WireframeImage:
    """H x W x C raster with values in [0, 1]; uncovered pixels are 1.0."""

    values: np.ndarray  # float32, shape (height, width, channels)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def channels(self) -> int:
        return self.values.shape[2]


def grey_level(ctype: ComponentType) -> float:
    """Evenly spaced grey levels (i+1)/17; never 0.0 or the 1.0 background."""
    return (ctype.code + 1) / 17.0


def color_fill(ctype: ComponentType) -> tuple[float, float, float]:
    """16 maximally separated hues at full saturation and value."""
    hue = ctype.code / 16.0
    return colorsys.hsv_to_rgb(hue, 1.0, 1.0)


def texture_pattern_id(ctype: ComponentType) -> int:
    return ctype.code


def palette_lookup(mode: RepresentationMode, ctype: ComponentType):
    """Fill spec for a component type under a representation mode.

    Grey -> scalar; Color -> (r, g, b); Texture -> ((r, g, b), pattern id).
    """
    if mode is RepresentationMode.Grey:
        return grey_level(ctype)
    if mode is RepresentationMode.Color:
        return color_fill(ctype)
    return color_fill(ctype), texture_pattern_id(ctype)


def _texture_mask(pattern_id: int, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Boolean mask (True = darkened pixel) for one of the 16 patterns.

    Coordinates are relative to the component's top-left corner so a
    component's texture does not depend on its position on the canvas.
    """
    y, x = ys, xs
    if pattern_id == 0:
        return (y % 4) < 2
    if pattern_id == 1:
        return (x % 4) < 2
    if pattern_id == 2:
        return ((x + y) % 4) < 2
    if pattern_id == 3:
        return ((x - y) % 4) < 2
    if pattern_id == 4:
        return ((x // 2 + y // 2) % 2) == 0
    if pattern_id == 5:
        return ((x // 4 + y // 4) % 2) == 0
    if pattern_id == 6:
        return (y % 8) < 4
    if pattern_id == 7:
        return (x % 8) < 4
    if pattern_id == 8:
        return ((x + y) % 8) < 4
    if pattern_id == 9:
        return ((x - y) % 8) < 4
    if pattern_id == 10:
        return ((x % 4) < 2) & ((y % 4) < 2)
    if pattern_id == 11:
        return ((x % 4) < 2) | ((y % 4) < 2)
    if pattern_id == 12:
        return ((x % 4) < 2) ^ ((y % 4) < 2)
    if pattern_id == 13:
        return ((x + 2 * y) % 4) < 2
    if pattern_id == 14:
        return ((2 * x + y) % 4) < 2
    if pattern_id == 15:
        return ((x + y) % 2) == 0
    raise ValueError(f"unknown pattern id {pattern_id}")


def map_bounds(bounds, scale_x: float, scale_y: float, out_w: int, out_h: int):
    """Screen-space rectangle to raster pixel range.

    floor on left/top and ceil on right/bottom keeps sub-pixel components
    at least one pixel visible after downscaling.
    """
    left = max(0, math.floor(bounds.left * scale_x))
    top = max(0, math.floor(bounds.top * scale_y))
    right = min(out_w, math.ceil(bounds.right * scale_x))
    bottom = min(out_h, math.ceil(bounds.bottom * scale_y))
    return left, top, right, bottom


def render(
    screen: UIScreen,
    mode: RepresentationMode,
    out_size: tuple[int, int],
) -> WireframeImage:
    """Rasterize a screen onto a white canvas.

    Components are painted in descending-area order so smaller components
    overpaint larger ones (foreground controls stay visible over full-bleed
    backgrounds). Ties keep document order; the result is deterministic.
    """
    out_w, out_h = out_size
    if out_w <= 0 or out_h <= 0:
        raise ValueError("out_size must be positive")
    channels = mode.channels
    canvas = np.ones((out_h, out_w, channels), dtype=np.float32)
    scale_x = out_w / screen.width
    scale_y = out_h / screen.height

    order = sorted(screen.components, key=lambda c: -c.bounds.area)
    for comp in order:
        left, top, right, bottom = map_bounds(comp.bounds, scale_x, scale_y, out_w, out_h)
        if right <= left or bottom <= top:
            continue
        if mode is RepresentationMode.Grey:
            canvas[top:bottom, left:right, 0] = grey_level(comp.ctype)
        elif mode is RepresentationMode.Color:
            canvas[top:bottom, left:right, :] = color_fill(comp.ctype)
        else:
            rgb = np.array(color_fill(comp.ctype), dtype=np.float32)
            ys, xs = np.mgrid[0 : bottom - top, 0 : right - left]
            mask = _texture_mask(texture_pattern_id(comp.ctype), ys, xs)
            block = np.where(mask[:, :, None], rgb * 0.5, rgb)
            canvas[top:bottom, left:right, :] = block
    return WireframeImage(canvas)


def to_png_bytes(image: WireframeImage) -> bytes:
    from io import BytesIO

    from PIL import Image

    arr = np.round(image.values * 255.0).astype(np.uint8)
    if image.channels == 1:
        pil = Image.fromarray(arr[:, :, 0], mode="L")
    else:
        pil = Image.fromarray(arr, mode="RGB")
    buf = BytesIO()
    pil.save(buf, format="PNG")
    return buf.getvalue()


def save_png(image: WireframeImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_png_bytes(image))


def save_tensor(image: WireframeImage, path) -> None:
    """Raw float dump: magic, u32 w/h/c, little-endian f32 payload."""
    with open(path, "wb") as fh:
        fh.write(TENSOR_MAGIC)
        fh.write(struct.pack("<III", image.width, image.height, image.channels))
        fh.write(image.values.astype("<f4").tobytes())


def load_tensor(path) -> WireframeImage:
    with open(path, "rb") as fh:
        magic = fh.read(len(TENSOR_MAGIC))
        if magic != TENSOR_MAGIC:
            raise ValueError(f"bad tensor magic {magic!r}")
        w, h, c = struct.unpack("<III", fh.read(12))
        payload = fh.read(w * h * c * 4)
        if len(payload) != w * h * c * 4:
            raise ValueError("truncated tensor payload")
        values = np.frombuffer(payload, dtype="<f4").reshape(h, w, c).copy()
    return WireframeImage(values)
