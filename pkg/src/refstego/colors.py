"""16-colour RGBI conversions: colour number, return code, grey shade, grey code.

A *colour number* is the palette ordering used by bitmap files (red = 1,
blue = 4).  The *return code* is the CGA ordering with bit layout I R G B
(blue = 1, red = 4); the two differ by swapping bit 0 and bit 2.  Each return
code collapses to one of four grey shades 0, 7, 8, 15, whose top two bits are
the 2-bit grey code that carries hidden data.

The tables below are precomputed from the bit procedures; the test suite keeps
those procedures as the generating oracle.
"""

import numpy as np

from .errors import InvalidShade

# indexed by colour number (or return code: the swap is its own inverse)
_SWAP_TABLE = (0, 4, 2, 6, 1, 5, 3, 7, 8, 12, 10, 14, 9, 13, 11, 15)

# indexed by return code
_SHADE_TABLE = (0, 8, 0, 8, 0, 8, 0, 7, 8, 15, 7, 15, 7, 15, 7, 15)

GREY_SHADES = (0, 7, 8, 15)

# standard CGA colourset, indexed by return code
CGA_RGB = (
    (0x00, 0x00, 0x00), (0x00, 0x00, 0xAA), (0x00, 0xAA, 0x00), (0x00, 0xAA, 0xAA),
    (0xAA, 0x00, 0x00), (0xAA, 0x00, 0xAA), (0xAA, 0x55, 0x00), (0xAA, 0xAA, 0xAA),
    (0x55, 0x55, 0x55), (0x55, 0x55, 0xFF), (0x55, 0xFF, 0x55), (0x55, 0xFF, 0xFF),
    (0xFF, 0x55, 0x55), (0xFF, 0x55, 0xFF), (0xFF, 0xFF, 0x55), (0xFF, 0xFF, 0xFF),
)

# the same colours laid out as a bitmap palette, indexed by colour number
BITMAP_PALETTE = tuple(CGA_RGB[rc] for rc in _SWAP_TABLE)

COLOR_NAMES = (
    "Black", "Red", "Green", "Brown", "Blue", "Magenta", "Cyan", "Light Gray",
    "Dark Gray", "Light Red", "Light Green", "Yellow", "Light Blue",
    "Light Magenta", "Light Cyan", "White",
)


def _check_nibble(value, what):
    if not 0 <= value <= 15:
        raise ValueError(f"{what} must be in 0..15, got {value}")


def color_number_to_return_code(n: int) -> int:
    _check_nibble(n, "colour number")
    return _SWAP_TABLE[n]


def return_code_to_color_number(rc: int) -> int:
    _check_nibble(rc, "return code")
    return _SWAP_TABLE[rc]


def return_code_to_grey_shade(rc: int) -> int:
    """Collapse a return code to one of the four shades 0, 7, 8, 15.

    Codes 0, 7, 8 and 15 map to themselves.  Every other code is shifted left
    three times inside a 4-bit register, refilling the low bit with the
    intensity bit each time.
    """
    _check_nibble(rc, "return code")
    return _SHADE_TABLE[rc]


def grey_shade_to_code2(shade: int) -> int:
    if shade not in GREY_SHADES:
        raise InvalidShade(f"{shade} is not one of the grey shades {GREY_SHADES}")
    return shade >> 2


def code2_to_grey_shade(code: int) -> int:
    if not 0 <= code <= 3:
        raise ValueError(f"grey code must be in 0..3, got {code}")
    return GREY_SHADES[code]


def palette_entry_to_color_number(rgb) -> int:
    """Colour number of the nearest canonical CGA colour (squared RGB distance).

    Ties go to the lowest colour number.
    """
    r, g, b = rgb
    best, best_dist = 0, None
    for n in range(16):
        cr, cg, cb = BITMAP_PALETTE[n]
        dist = (r - cr) ** 2 + (g - cg) ** 2 + (b - cb) ** 2
        if best_dist is None or dist < best_dist:
            best, best_dist = n, dist
    return best


def code2_lut(palette=None) -> np.ndarray:
    """16-entry table from pixel index straight to grey code.

    With ``palette`` given, each index is first matched to its nearest CGA
    colour; without it, the index is taken as the colour number itself.
    """
    if palette is None:
        numbers = range(16)
    else:
        numbers = [palette_entry_to_color_number(entry) for entry in palette]
    return np.array(
        [grey_shade_to_code2(return_code_to_grey_shade(color_number_to_return_code(n)))
         for n in numbers],
        dtype=np.uint8,
    )
