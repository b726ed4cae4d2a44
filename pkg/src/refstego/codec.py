"""Hide a message as coordinate records and recover it again.

Each message byte is split into four 2-bit chunks, most significant first.
For every chunk, ``hide`` emits the coordinate of some pixel in the reference
image whose grey code equals the chunk.  The image itself is never touched.
"""

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import CoordOutOfBounds, LengthNotMultipleOfFour, MissingShade
from .prng import bounded, splitmix64_stream
from .reference import RECORD_DTYPE, OccurrenceIndex, ReferenceImage

_SHIFTS = np.array([6, 4, 2, 0], dtype=np.uint8)


class CoordRecord(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class FirstOccurrence:
    pass


@dataclass(frozen=True)
class Random:
    seed: int

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


Strategy = Union[FirstOccurrence, Random]


def byte_to_chunks(b: int) -> tuple:
    if not 0 <= b <= 255:
        raise ValueError(f"byte out of range: {b}")
    return ((b >> 6) & 3, (b >> 4) & 3, (b >> 2) & 3, b & 3)


def chunks_to_byte(chunks) -> int:
    c0, c1, c2, c3 = chunks
    for c in chunks:
        if not 0 <= c <= 3:
            raise ValueError(f"chunk out of range: {c}")
    return (c0 << 6) | (c1 << 4) | (c2 << 2) | c3


def message_chunks(msg: bytes) -> np.ndarray:
    """All chunks of ``msg`` in order, as a flat uint8 array of length 4*len."""
    data = np.frombuffer(bytes(msg), dtype=np.uint8)
    return ((data[:, None] >> _SHIFTS) & 3).ravel()


def as_records(records) -> np.ndarray:
    """Coerce ``records`` (structured array or ``(x, y)`` pairs) to RECORD_DTYPE."""
    if isinstance(records, np.ndarray) and records.dtype == RECORD_DTYPE:
        return records
    if not isinstance(records, np.ndarray):
        records = list(records)
    pairs = np.asarray(records, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() > 0xFFFF):
        raise ValueError("coordinates must fit in 16 bits")
    out = np.empty(len(pairs), dtype=RECORD_DTYPE)
    out["x"] = pairs[:, 0]
    out["y"] = pairs[:, 1]
    return out


def hide(msg: bytes, index: OccurrenceIndex, strategy: Strategy = FirstOccurrence()):
    """Coordinate records for ``msg``: a structured array of 4*len(msg) (x, y) rows."""
    chunks = message_chunks(msg)
    sizes = index.sizes()

    needed = np.bincount(chunks, minlength=4) > 0
    missing = needed & (sizes == 0)
    if missing.any():
        # report the missing code that the message needs first
        first = min(int(np.argmax(chunks == c)) for c in np.flatnonzero(missing))
        raise MissingShade(int(chunks[first]))

    out = np.empty(len(chunks), dtype=RECORD_DTYPE)
    if isinstance(strategy, FirstOccurrence):
        firsts = np.zeros(4, dtype=RECORD_DTYPE)
        for c in range(4):
            if sizes[c]:
                firsts[c] = index.buckets[c][0]
        out[:] = firsts[chunks]
    elif isinstance(strategy, Random):
        picks = bounded(splitmix64_stream(strategy.seed, len(chunks)), sizes[chunks])
        for c in range(4):
            where = chunks == c
            if where.any():
                out[where] = index.buckets[c][picks[where].astype(np.int64)]
    else:
        raise TypeError(f"unknown selection strategy {strategy!r}")
    return out


def unhide(records, ref: ReferenceImage) -> bytes:
    records = as_records(records)
    if len(records) % 4:
        raise LengthNotMultipleOfFour(f"{len(records)} records do not form whole bytes")
    xs = records["x"].astype(np.int64)
    ys = records["y"].astype(np.int64)
    outside = (xs >= ref.width) | (ys >= ref.height)
    if outside.any():
        pos = int(np.argmax(outside))
        raise CoordOutOfBounds(pos, (xs[pos], ys[pos]), (ref.width, ref.height))
    chunks = ref.codes[ys, xs].reshape(-1, 4)
    return ((chunks << _SHIFTS).sum(axis=1, dtype=np.uint16)).astype(np.uint8).tobytes()
