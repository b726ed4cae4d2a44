"""The RSTG payload file: the coordinate records that travel apart from the image.

Layout (little-endian)::

    offset  size  field
    0       4     magic "RSTG"
    4       1     version (1)
    5       1     reserved flags (0)
    6       4     message length in bytes, n
    10      16n   4n records of x (u16), y (u16)
"""

import struct
from dataclasses import dataclass

import numpy as np

from .codec import as_records
from .errors import BadMagic, TooLong, TrailingGarbage, Truncated, UnsupportedVersion
from .reference import RECORD_DTYPE

MAGIC = b"RSTG"
VERSION = 1
HEADER = struct.Struct("<4sBBI")
RECORD_SIZE = 4
MAX_MESSAGE_LENGTH = 2**32 - 1


@dataclass(eq=False)
class PayloadFile:
    version: int
    message_length: int
    records: np.ndarray

    def __post_init__(self):
        self.records = as_records(self.records)
        if len(self.records) != 4 * self.message_length:
            raise ValueError(
                f"{len(self.records)} records for a {self.message_length}-byte message"
            )

    @classmethod
    def from_records(cls, records, version=VERSION):
        records = as_records(records)
        if len(records) % 4:
            raise ValueError("record count must be a multiple of four")
        return cls(version, len(records) // 4, records)

    def __eq__(self, other):
        if not isinstance(other, PayloadFile):
            return NotImplemented
        return (self.version == other.version
                and self.message_length == other.message_length
                and np.array_equal(self.records, other.records))

    __hash__ = None


def serialize(payload: PayloadFile) -> bytes:
    if payload.message_length > MAX_MESSAGE_LENGTH:
        raise TooLong(f"message of {payload.message_length} bytes exceeds the 32-bit length field")
    header = HEADER.pack(MAGIC, payload.version, 0, payload.message_length)
    return header + payload.records.tobytes()


def deserialize(data: bytes) -> PayloadFile:
    data = memoryview(data).cast("B")
    if len(data) < len(MAGIC) or bytes(data[:4]) != MAGIC:
        raise BadMagic("not an RSTG payload")
    if len(data) < HEADER.size:
        raise Truncated("payload header is incomplete")
    _, version, flags, length = HEADER.unpack_from(data)
    if version != VERSION:
        raise UnsupportedVersion(f"payload version {version}")
    if flags:
        raise UnsupportedVersion(f"reserved flags set: {flags:#04x}")
    expected = HEADER.size + 4 * RECORD_SIZE * length
    if len(data) < expected:
        raise Truncated(f"header promises {length} bytes of message, needs {expected} bytes")
    if len(data) > expected:
        raise TrailingGarbage(f"{len(data) - expected} bytes after the last record")
    records = np.frombuffer(data[HEADER.size:], dtype=RECORD_DTYPE).copy()
    return PayloadFile(version, length, records)
