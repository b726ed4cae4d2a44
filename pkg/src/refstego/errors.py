"""Exception hierarchy.

Every error the library raises on bad input derives from :class:`StegoError`.
``exit_code`` is what the command line front end returns for that class.
"""


class StegoError(Exception):
    exit_code = 1

    #: set by the transport layer to say which channel delivered the bad data
    channel = None

    def __str__(self):
        text = super().__str__()
        if self.channel:
            return f"channel {self.channel}: {text}"
        return text


class FormatError(StegoError, ValueError):
    """Input bytes or values do not follow the expected layout."""

    exit_code = 3


class NotBmp(FormatError):
    pass


class UnsupportedDepth(FormatError):
    pass


class UnsupportedCompression(FormatError):
    pass


class UnsupportedHeader(FormatError):
    pass


class BadDimensions(FormatError):
    pass


class Truncated(FormatError):
    pass


class TrailingGarbage(FormatError):
    pass


class BadMagic(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass


class TooLong(FormatError):
    pass


class InvalidShade(FormatError):
    pass


class CoordOutOfBounds(FormatError):
    def __init__(self, position, coord, size):
        super().__init__(
            f"record {position} at {tuple(coord)} is outside the {size[0]}x{size[1]} image"
        )
        self.position = position


class LengthNotMultipleOfFour(FormatError):
    pass


class MissingShade(StegoError):
    """The reference image has no pixel carrying a grey code the message needs."""

    exit_code = 4

    def __init__(self, code):
        super().__init__(f"reference image has no pixel with grey code {code:02b}")
        self.code = code


class TransportError(StegoError):
    exit_code = 5


class Incomplete(TransportError):
    pass


class BadKind(TransportError):
    pass


class ChecksumMismatch(TransportError):
    pass


class ProtocolError(TransportError):
    pass


class ChannelWriteError(TransportError):
    pass
