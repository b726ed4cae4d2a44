"""SplitMix64, the seeded generator behind random occurrence selection.

SplitMix64 output ``i`` depends only on ``seed + (i + 1) * GAMMA``, so a whole
stream can be produced at once with numpy.  The scalar class is kept for
clarity and for checking the vectorised path.
"""

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK64

    def next(self):
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)


def splitmix64_stream(seed, count) -> np.ndarray:
    """The first ``count`` outputs of ``SplitMix64(seed)`` as uint64."""
    steps = np.arange(1, count + 1, dtype=np.uint64)
    z = steps * np.uint64(GAMMA) + np.uint64(seed & MASK64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def bounded(draws, n) -> np.ndarray:
    """Map 64-bit draws onto ``range(n)`` with one draw each; ``n`` < 2**32."""
    return ((draws >> np.uint64(32)) * np.asarray(n, dtype=np.uint64)) >> np.uint64(32)
