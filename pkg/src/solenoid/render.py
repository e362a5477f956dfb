"""Raster pictures of attractors as binary PGM files.

Columns cover ``theta`` in ``[0, 1)`` and rows cover the strip ``[-T0, T0]``
with row 0 at the top (``t = +T0``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# grey levels per layer; later layers are drawn over earlier ones
BAND = 96
REGION = 176
POINTS = 255


class EmptyInput(ValueError):
    """Nothing to draw."""


@dataclass(frozen=True, eq=False)
class RasterImage:
    cells: np.ndarray  # (height, width) uint8
    t0: float

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    def to_pgm(self) -> bytes:
        header = f"P5\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.cells, dtype=np.uint8).tobytes()

    def save(self, path: str) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_pgm())


def read_pgm(data: bytes) -> np.ndarray:
    """Pixels of a binary PGM with maxval 255."""
    parts = data.split(maxsplit=4)
    if len(parts) < 5 or parts[0] != b"P5" or int(parts[3]) != 255:
        raise ValueError("not an 8-bit binary PGM")
    w, h = int(parts[1]), int(parts[2])
    pix = np.frombuffer(parts[4][: w * h], dtype=np.uint8)
    return pix.reshape(h, w)


def blank(width: int, height: int, t0: float) -> RasterImage:
    if width < 1 or height < 1:
        raise ValueError("image needs positive size")
    if not t0 > 0:
        raise ValueError("strip half-height must be positive")
    return RasterImage(np.zeros((height, width), dtype=np.uint8), float(t0))


def row_of(t, height: int, t0: float) -> np.ndarray:
    """Row index of fibre height ``t`` (row 0 is ``t = +t0``)."""
    r = np.floor((t0 - np.asarray(t, dtype=float)) / (2.0 * t0) * height).astype(np.int64)
    return np.clip(r, 0, height - 1)


def _column_centres(width: int) -> np.ndarray:
    return (np.arange(width) + 0.5) / width


def draw_points(img: RasterImage, theta, t, level: int = POINTS) -> RasterImage:
    theta = np.asarray(theta, dtype=float).ravel()
    t = np.asarray(t, dtype=float).ravel()
    if theta.size == 0:
        raise EmptyInput("no points to draw")
    if np.any(np.abs(t) > img.t0):
        raise ValueError("points leave the strip")
    cols = np.clip(np.floor(np.mod(theta, 1.0) * img.width).astype(np.int64), 0, img.width - 1)
    img.cells[row_of(t, img.height, img.t0), cols] = level
    return img


def draw_band(img: RasterImage, lower, upper, level: int = BAND) -> RasterImage:
    """Fill each column between two functions given as callables of ``theta``."""
    x = _column_centres(img.width)
    lo, hi = np.asarray(lower(x), dtype=float), np.asarray(upper(x), dtype=float)
    if np.any(hi < lo):
        raise ValueError("band edges cross")
    r_top = row_of(hi, img.height, img.t0)
    r_bot = row_of(lo, img.height, img.t0)
    rows = np.arange(img.height)[:, None]
    mask = (rows >= r_top[None, :]) & (rows <= r_bot[None, :])
    img.cells[mask] = level
    return img


def render_points(theta, t, width: int = 512, height: int = 256, t0: float = 1.0) -> RasterImage:
    return draw_points(blank(width, height, t0), theta, t)


def render_band(lower, upper, width: int = 512, height: int = 256, t0: float = 1.0) -> RasterImage:
    return draw_band(blank(width, height, t0), lower, upper)
