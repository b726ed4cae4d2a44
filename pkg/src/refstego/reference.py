"""Grey reference images and the per-code occurrence index.

Coordinates use the logical image: ``(0, 0)`` is the top-left pixel, ``x`` is
the column and ``y`` the row.  Occurrence lists are in row-major scan order.
"""

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bmp4 import Bmp4Image
from .colors import BITMAP_PALETTE, GREY_SHADES, code2_lut

RECORD_DTYPE = np.dtype([("x", "<u2"), ("y", "<u2")])


class Coord(NamedTuple):
    x: int
    y: int


class PaletteMode(enum.Enum):
    #: pixel indices are CGA colour numbers already
    RAW_INDEX = "raw"
    #: each palette entry is matched to its nearest CGA colour
    MATCH_PALETTE = "match"


_SHADE_LUT = np.array(GREY_SHADES, dtype=np.uint8)


@dataclass(frozen=True, eq=False)
class ReferenceImage:
    """Per-pixel 2-bit grey codes, shape ``(height, width)``, read-only."""

    codes: np.ndarray

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.uint8, copy=True)
        if codes.ndim != 2 or codes.size == 0:
            raise ValueError(f"codes must be a non-empty 2-D array, got shape {codes.shape}")
        if codes.max() > 3:
            raise ValueError("grey codes must be in 0..3")
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)

    @property
    def width(self):
        return self.codes.shape[1]

    @property
    def height(self):
        return self.codes.shape[0]

    @property
    def shades(self) -> np.ndarray:
        return _SHADE_LUT[self.codes]

    def histogram(self):
        """Pixel count for each grey code 0..3."""
        return np.bincount(self.codes.ravel(), minlength=4)

    def __eq__(self, other):
        if not isinstance(other, ReferenceImage):
            return NotImplemented
        return np.array_equal(self.codes, other.codes)

    __hash__ = None


def to_reference_image(image: Bmp4Image, mode: PaletteMode = PaletteMode.MATCH_PALETTE):
    if mode is PaletteMode.RAW_INDEX:
        lut = code2_lut()
    elif mode is PaletteMode.MATCH_PALETTE:
        lut = code2_lut(image.palette)
    else:
        raise ValueError(f"unknown palette mode {mode!r}")
    return ReferenceImage(lut[image.pixels])


class OccurrenceIndex:
    """For each grey code, every coordinate carrying it, in scan order.

    ``buckets[c]`` is a structured array with fields ``x`` and ``y``.
    """

    def __init__(self, buckets, width, height):
        self.buckets = tuple(buckets)
        self.width = width
        self.height = height
        for bucket in self.buckets:
            bucket.flags.writeable = False

    def coords(self, code):
        return [Coord(int(x), int(y)) for x, y in self.buckets[code].tolist()]

    def sizes(self):
        return np.array([len(b) for b in self.buckets], dtype=np.int64)

    def __len__(self):
        return int(self.sizes().sum())


def build_index(ref: ReferenceImage) -> OccurrenceIndex:
    flat = ref.codes.ravel()
    order = np.argsort(flat, kind="stable")
    counts = np.bincount(flat, minlength=4)
    records = np.empty(flat.size, dtype=RECORD_DTYPE)
    records["x"] = order % ref.width
    records["y"] = order // ref.width
    bounds = np.concatenate(([0], np.cumsum(counts)))
    buckets = [records[bounds[c]:bounds[c + 1]] for c in range(4)]
    return OccurrenceIndex(buckets, ref.width, ref.height)


def export_grey_bmp(ref: ReferenceImage) -> Bmp4Image:
    """Render the reference as a BMP whose pixel indices are the shades 0/7/8/15.

    The palette is the full CGA bitmap palette, so the four shade indices show
    as black, light grey, dark grey and white and re-importing in either
    palette mode yields the same codes.
    """
    return Bmp4Image(palette=BITMAP_PALETTE, pixels=ref.shades)
