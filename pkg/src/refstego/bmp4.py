"""Read and write uncompressed 4-bit indexed BMP files.

Only the BITMAPINFOHEADER layout is written.  Pixels are held as a
``(height, width)`` uint8 array in logical order: row 0 is the top of the
picture whatever the storage order of the file.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadDimensions,
    NotBmp,
    Truncated,
    UnsupportedCompression,
    UnsupportedDepth,
    UnsupportedHeader,
)

FILE_HEADER = struct.Struct("<2sIHHI")
INFO_HEADER = struct.Struct("<IiiHHIIiiII")
MAX_DIMENSION = 65535
PALETTE_SIZE = 16


def row_stride(width):
    """Bytes per stored row: two pixels per byte, padded to 4 bytes."""
    return (width + 7) // 8 * 4


@dataclass(frozen=True, eq=False)
class Bmp4Image:
    palette: tuple
    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.array(self.pixels, dtype=np.uint8, copy=True)
        if pixels.ndim != 2:
            raise BadDimensions(f"pixels must be 2-D, got shape {pixels.shape}")
        height, width = pixels.shape
        if not (1 <= width <= MAX_DIMENSION and 1 <= height <= MAX_DIMENSION):
            raise BadDimensions(f"{width}x{height} is outside 1..{MAX_DIMENSION}")
        if pixels.max() > 15:
            raise ValueError("pixel indices must be in 0..15")
        pixels.flags.writeable = False

        palette = tuple(tuple(int(c) for c in entry) for entry in self.palette)
        if len(palette) != PALETTE_SIZE:
            raise ValueError(f"palette needs {PALETTE_SIZE} entries, got {len(palette)}")
        for entry in palette:
            if len(entry) != 3 or not all(0 <= c <= 255 for c in entry):
                raise ValueError(f"bad palette entry {entry}")

        object.__setattr__(self, "pixels", pixels)
        object.__setattr__(self, "palette", palette)

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Bmp4Image):
            return NotImplemented
        return self.palette == other.palette and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


def parse_bmp(data: bytes) -> Bmp4Image:
    data = memoryview(data).cast("B")
    if bytes(data[:2]) != b"BM":
        raise NotBmp("missing 'BM' signature")
    if len(data) < FILE_HEADER.size + 4:
        raise Truncated("file header is incomplete")
    _, _, _, _, pixel_offset = FILE_HEADER.unpack_from(data)

    header_size = struct.unpack_from("<I", data, FILE_HEADER.size)[0]
    if header_size < INFO_HEADER.size:
        raise UnsupportedHeader(f"info header of {header_size} bytes is not supported")
    if len(data) < FILE_HEADER.size + INFO_HEADER.size:
        raise Truncated("info header is incomplete")
    (_, width, height, _planes, bpp, compression, _, _, _,
     colors_used, _) = INFO_HEADER.unpack_from(data, FILE_HEADER.size)

    if bpp != 4:
        raise UnsupportedDepth(f"{bpp} bits per pixel; only 4 is supported")
    if compression != 0:
        raise UnsupportedCompression(f"compression type {compression}")
    if not (1 <= width <= MAX_DIMENSION and 1 <= abs(height) <= MAX_DIMENSION):
        raise BadDimensions(f"{width}x{height} is outside 1..{MAX_DIMENSION}")
    if colors_used == 0:
        colors_used = PALETTE_SIZE
    elif colors_used > PALETTE_SIZE:
        raise UnsupportedDepth(f"{colors_used} palette entries declared for a 4-bit image")

    palette_start = FILE_HEADER.size + header_size
    palette_end = palette_start + 4 * colors_used
    if len(data) < palette_end:
        raise Truncated("palette is incomplete")
    raw = np.frombuffer(data[palette_start:palette_end], dtype=np.uint8).reshape(-1, 4)
    palette = [(int(r), int(g), int(b)) for b, g, r, _ in raw]
    palette += [(0, 0, 0)] * (PALETTE_SIZE - len(palette))

    rows = abs(height)
    stride = row_stride(width)
    if len(data) < pixel_offset + stride * rows:
        raise Truncated(f"pixel data needs {stride * rows} bytes from offset {pixel_offset}")
    packed = np.frombuffer(data[pixel_offset:pixel_offset + stride * rows],
                           dtype=np.uint8).reshape(rows, stride)
    pixels = np.empty((rows, stride * 2), dtype=np.uint8)
    pixels[:, 0::2] = packed >> 4
    pixels[:, 1::2] = packed & 0x0F
    pixels = pixels[:, :width]
    if height > 0:
        pixels = pixels[::-1]
    return Bmp4Image(palette=tuple(palette), pixels=pixels)


def write_bmp(image: Bmp4Image) -> bytes:
    """Canonical bottom-up BMP with a 16-entry palette and no compression."""
    width, height = image.width, image.height
    if not (1 <= width <= MAX_DIMENSION and 1 <= height <= MAX_DIMENSION):
        raise BadDimensions(f"{width}x{height} is outside 1..{MAX_DIMENSION}")
    stride = row_stride(width)
    pixel_offset = FILE_HEADER.size + INFO_HEADER.size + 4 * PALETTE_SIZE
    image_size = stride * height

    padded = np.zeros((height, stride * 2), dtype=np.uint8)
    padded[:, :width] = image.pixels[::-1]
    packed = (padded[:, 0::2] << 4) | padded[:, 1::2]

    palette = bytes(c for r, g, b in image.palette for c in (b, g, r, 0))
    return b"".join((
        FILE_HEADER.pack(b"BM", pixel_offset + image_size, 0, 0, pixel_offset),
        INFO_HEADER.pack(INFO_HEADER.size, width, height, 1, 4, 0, image_size,
                         0, 0, PALETTE_SIZE, 0),
        palette,
        packed.tobytes(),
    ))


def read_bmp(path) -> Bmp4Image:
    with open(path, "rb") as f:
        return parse_bmp(f.read())
