"""Split-channel delivery: the grey image on one channel, the payload on another.

Frame layout (little-endian)::

    kind (1 byte: 0x01 IMAGE, 0x02 PAYLOAD) | body length (u32) | body | CRC-32 of body (u32)

A channel is any object with ``sendall(data)``, ``close()`` and
``recv_exact(n, deadline)``; the last returns exactly ``n`` bytes, raises
``EOFError`` (carrying the bytes read so far) when the peer closes early, and
``TimeoutError`` once ``time.monotonic()`` passes ``deadline``.
"""

import enum
import socket
import struct
import threading
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .bmp4 import parse_bmp
from .codec import unhide
from .errors import (
    BadKind,
    ChannelWriteError,
    ChecksumMismatch,
    Incomplete,
    ProtocolError,
    StegoError,
    TooLong,
    TrailingGarbage,
    Truncated,
)
from .payload import deserialize
from .reference import PaletteMode, to_reference_image

FRAME_HEADER = struct.Struct("<BI")
CRC = struct.Struct("<I")
MAX_BODY = 2**32 - 1
DEFAULT_TIMEOUT = 30.0


class FrameKind(enum.IntEnum):
    IMAGE = 0x01
    PAYLOAD = 0x02


def _kind(byte):
    try:
        return FrameKind(byte)
    except ValueError:
        raise BadKind(f"unknown frame kind {byte:#04x}") from None


def encode_frame(kind: FrameKind, body: bytes) -> bytes:
    kind = FrameKind(kind)
    if len(body) > MAX_BODY:
        raise TooLong(f"frame body of {len(body)} bytes exceeds the 32-bit length field")
    return FRAME_HEADER.pack(kind, len(body)) + bytes(body) + CRC.pack(zlib.crc32(body))


def decode_frame(data: bytes):
    """Inverse of :func:`encode_frame` for one complete frame."""
    data = bytes(data)
    if len(data) < FRAME_HEADER.size:
        raise Truncated("frame header is incomplete")
    kind_byte, length = FRAME_HEADER.unpack_from(data)
    kind = _kind(kind_byte)
    end = FRAME_HEADER.size + length + CRC.size
    if len(data) < end:
        raise Truncated(f"frame announces {length} body bytes")
    if len(data) > end:
        raise TrailingGarbage(f"{len(data) - end} bytes after the frame")
    body = data[FRAME_HEADER.size:end - CRC.size]
    _check_crc(body, data[end - CRC.size:end])
    return kind, body


def _check_crc(body, trailer):
    (expected,) = CRC.unpack(trailer)
    actual = zlib.crc32(body)
    if actual != expected:
        raise ChecksumMismatch(f"CRC-32 {actual:#010x} does not match {expected:#010x}")


def read_frame(channel, deadline):
    """Read one frame from ``channel``.

    Returns ``None`` if the channel closes or the deadline passes before any
    byte arrives.  A frame cut off part way raises ``Truncated`` (peer closed)
    or ``Incomplete`` (deadline).
    """
    try:
        header = channel.recv_exact(FRAME_HEADER.size, deadline)
    except EOFError as exc:
        if not exc.args or not exc.args[0]:
            return None
        raise Truncated("channel closed inside a frame header") from None
    except TimeoutError:
        return None
    kind_byte, length = FRAME_HEADER.unpack(header)
    kind = _kind(kind_byte)
    try:
        rest = channel.recv_exact(length + CRC.size, deadline)
    except EOFError:
        raise Truncated(f"channel closed inside a {kind.name} frame") from None
    except TimeoutError:
        raise Incomplete(f"timed out inside a {kind.name} frame") from None
    body = rest[:length]
    _check_crc(body, rest[length:])
    return kind, body


class LoopbackChannel:
    """In-memory byte stream; the writer and reader share one object."""

    def __init__(self):
        self._buffer = bytearray()
        self._closed = False
        self._cond = threading.Condition()

    def sendall(self, data):
        with self._cond:
            if self._closed:
                raise BrokenPipeError("loopback channel is closed")
            self._buffer += data
            self._cond.notify_all()

    def close(self):
        with self._cond:
            self._closed = True
            self._cond.notify_all()

    def recv_exact(self, n, deadline=None):
        with self._cond:
            while len(self._buffer) < n:
                if self._closed:
                    partial = bytes(self._buffer)
                    self._buffer.clear()
                    raise EOFError(partial)
                remaining = None if deadline is None else deadline - time.monotonic()
                if remaining is not None and remaining <= 0:
                    raise TimeoutError
                self._cond.wait(remaining)
            out = bytes(self._buffer[:n])
            del self._buffer[:n]
            return out


class SocketChannel:
    """A connected stream socket."""

    def __init__(self, sock):
        self.sock = sock

    @classmethod
    def connect(cls, address, timeout=DEFAULT_TIMEOUT):
        return cls(socket.create_connection(address, timeout=timeout))

    def sendall(self, data):
        self.sock.sendall(data)

    def close(self):
        try:
            self.sock.shutdown(socket.SHUT_WR)
        except OSError:
            pass
        self.sock.close()

    def recv_exact(self, n, deadline=None):
        buf = bytearray()
        while len(buf) < n:
            if deadline is not None:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    raise TimeoutError
                self.sock.settimeout(remaining)
            try:
                chunk = self.sock.recv(min(n - len(buf), 1 << 20))
            except socket.timeout:
                raise TimeoutError from None
            except ConnectionError:
                chunk = b""
            if not chunk:
                raise EOFError(bytes(buf))
            buf += chunk
        return bytes(buf)


class ListeningChannel:
    """Binds at construction and accepts one peer on the first read."""

    def __init__(self, address):
        self.listener = socket.create_server(address)
        self.address = self.listener.getsockname()[:2]
        self._conn = None

    def recv_exact(self, n, deadline=None):
        if self._conn is None:
            if deadline is not None:
                self.listener.settimeout(max(deadline - time.monotonic(), 0.001))
            try:
                sock, _ = self.listener.accept()
            except socket.timeout:
                raise TimeoutError from None
            self._conn = SocketChannel(sock)
        return self._conn.recv_exact(n, deadline)

    def close(self):
        if self._conn is not None:
            self._conn.sock.close()
        self.listener.close()


def send_session(image_bytes, payload_bytes, channel_a, channel_b, close=True):
    """Write the IMAGE frame to ``channel_a`` and the PAYLOAD frame to ``channel_b``.

    The two writes run in parallel and do not wait for each other.
    """
    jobs = {
        "a": (channel_a, encode_frame(FrameKind.IMAGE, image_bytes)),
        "b": (channel_b, encode_frame(FrameKind.PAYLOAD, payload_bytes)),
    }

    def send(name):
        channel, frame = jobs[name]
        try:
            channel.sendall(frame)
            if close:
                channel.close()
        except OSError as exc:
            err = ChannelWriteError(f"write failed: {exc}")
            err.channel = name
            raise err from exc

    with ThreadPoolExecutor(max_workers=2) as pool:
        futures = [pool.submit(send, name) for name in jobs]
    for future in futures:
        future.result()


@dataclass
class SessionState:
    received_image: Optional[bytes] = None
    received_payload: Optional[bytes] = None
    image_channel: Optional[str] = None
    payload_channel: Optional[str] = None

    @property
    def complete(self):
        return self.received_image is not None and self.received_payload is not None

    def accept(self, kind, body, channel):
        if kind is FrameKind.IMAGE:
            if self.received_image is not None:
                raise ProtocolError(f"second IMAGE frame on channel {channel}")
            self.received_image, self.image_channel = body, channel
        else:
            if self.received_payload is not None:
                raise ProtocolError(f"second PAYLOAD frame on channel {channel}")
            self.received_payload, self.payload_channel = body, channel


def _attributed(func, channel, *args):
    try:
        return func(*args)
    except StegoError as exc:
        exc.channel = channel
        raise


def receive_frames(channel_a, channel_b, timeout=DEFAULT_TIMEOUT) -> SessionState:
    """Read at most one frame from each channel, concurrently, and slot them by kind."""
    deadline = time.monotonic() + timeout
    channels = {"a": channel_a, "b": channel_b}
    with ThreadPoolExecutor(max_workers=2) as pool:
        futures = {name: pool.submit(_attributed, read_frame, name, ch, deadline)
                   for name, ch in channels.items()}
    state = SessionState()
    for name, future in futures.items():
        frame = future.result()
        if frame is not None:
            state.accept(*frame, name)
    return state


def receive_session(channel_a, channel_b, timeout=DEFAULT_TIMEOUT) -> bytes:
    """Wait for both frames, then rebuild the reference image and decode the message.

    Raises ``Incomplete`` unless both an IMAGE and a PAYLOAD frame arrive;
    nothing is decoded in that case.
    """
    state = receive_frames(channel_a, channel_b, timeout)
    if not state.complete:
        missing = [kind for kind, body in (("IMAGE", state.received_image),
                                           ("PAYLOAD", state.received_payload))
                   if body is None]
        raise Incomplete(f"no {' or '.join(missing)} frame received within {timeout:g}s")
    image = _attributed(parse_bmp, state.image_channel, state.received_image)
    payload = _attributed(deserialize, state.payload_channel, state.received_payload)
    ref = to_reference_image(image, PaletteMode.RAW_INDEX)
    return _attributed(unhide, state.payload_channel, payload.records, ref)
