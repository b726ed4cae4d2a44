import numpy as np
import pytest
from hypothesis import settings

from refstego.bmp4 import Bmp4Image
from refstego.colors import BITMAP_PALETTE

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

BLACK_PALETTE = ((0, 0, 0),) * 16

# colour numbers that land on each grey code in raw-index mode (Table 1 -> 2 -> 3)
COLORS_FOR_CODE = {
    0: (0, 1, 2, 3),
    1: (7, 9, 10, 11),
    2: (4, 5, 6, 8),
    3: (12, 13, 14, 15),
}


def random_cover(rng, width, height, palette=BITMAP_PALETTE):
    """Random 4-bit image with at least one pixel of every grey code (raw-index mode)."""
    pixels = rng.integers(0, 16, size=(height, width), dtype=np.uint8)
    spots = rng.choice(width * height, size=4, replace=False)
    for code, spot in enumerate(spots):
        pixels.flat[spot] = rng.choice(COLORS_FOR_CODE[code])
    return Bmp4Image(palette=palette, pixels=pixels)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def grid_2x2():
    """Raw-index image whose codes are [[00, 01], [10, 11]]."""
    return Bmp4Image(palette=BITMAP_PALETTE, pixels=[[0, 7], [8, 15]])


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
