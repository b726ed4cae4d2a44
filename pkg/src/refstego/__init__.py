"""Reference-image steganography for 4-bit indexed bitmaps.

A 16-colour BMP is reduced to a 4-shade grey reference image.  A message is
split into 2-bit chunks and written out as the coordinates of pixels carrying
each chunk's grey code.  The image is never modified; the message can only be
read back by combining the image with the coordinate payload.
"""

__version__ = "0.1.0"

from .bmp4 import Bmp4Image, parse_bmp, read_bmp, write_bmp
from .codec import (
    CoordRecord,
    FirstOccurrence,
    Random,
    byte_to_chunks,
    chunks_to_byte,
    hide,
    unhide,
)
from .colors import (
    code2_to_grey_shade,
    color_number_to_return_code,
    grey_shade_to_code2,
    palette_entry_to_color_number,
    return_code_to_color_number,
    return_code_to_grey_shade,
)
from .payload import PayloadFile, deserialize, serialize
from .reference import (
    Coord,
    OccurrenceIndex,
    PaletteMode,
    ReferenceImage,
    build_index,
    export_grey_bmp,
    to_reference_image,
)
from .transport import (
    FrameKind,
    LoopbackChannel,
    decode_frame,
    encode_frame,
    receive_session,
    send_session,
)
