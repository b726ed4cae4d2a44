"""Command line front end.

Exit status: 0 success, 1 I/O failure, 2 usage, 3 malformed input,
4 missing shade, 5 transport.
"""

import argparse
import sys

from . import __version__
from .bmp4 import parse_bmp, write_bmp
from .codec import FirstOccurrence, Random, hide, unhide
from .colors import COLOR_NAMES
from .errors import StegoError, TransportError
from .payload import MAGIC, PayloadFile, deserialize, serialize
from .reference import PaletteMode, build_index, export_grey_bmp, to_reference_image
from .transport import (
    DEFAULT_TIMEOUT,
    ListeningChannel,
    SocketChannel,
    receive_session,
    send_session,
)

EXIT_IO = 1

PREVIEW_RECORDS = 8


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def _write(path, data):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as f:
        f.write(data)


def _reference(path, mode):
    return to_reference_image(parse_bmp(_read(path)), PaletteMode(mode))


def _address(text):
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    return host or "127.0.0.1", int(port)


def cmd_convert(args):
    ref = _reference(args.input, args.palette_mode)
    _write(args.output, write_bmp(export_grey_bmp(ref)))


def cmd_hide(args):
    ref = _reference(args.reference, args.palette_mode)
    strategy = Random(args.seed) if args.strategy == "random" else FirstOccurrence()
    records = hide(_read(args.message), build_index(ref), strategy)
    _write(args.output, serialize(PayloadFile.from_records(records)))


def cmd_unhide(args):
    ref = _reference(args.reference, args.palette_mode)
    payload = deserialize(_read(args.payload))
    _write(args.output, unhide(payload.records, ref))


def cmd_inspect(args):
    data = _read(args.path)
    if data[:4] == MAGIC:
        payload = deserialize(data)
        print("type: RSTG payload")
        print(f"version: {payload.version}")
        print(f"message_length: {payload.message_length}")
        print(f"records: {len(payload.records)}")
        for i, (x, y) in enumerate(payload.records[:PREVIEW_RECORDS].tolist()):
            print(f"  [{i}] x={x} y={y}")
        if len(payload.records) > PREVIEW_RECORDS:
            print(f"  ... {len(payload.records) - PREVIEW_RECORDS} more")
        return

    image = parse_bmp(data)
    ref = to_reference_image(image, PaletteMode(args.palette_mode))
    index = build_index(ref)
    print("type: 4-bit BMP")
    print(f"size: {image.width}x{image.height}")
    print(f"palette_mode: {args.palette_mode}")
    for code, (count, size) in enumerate(zip(ref.histogram(), index.sizes())):
        shade = (0, 7, 8, 15)[code]
        print(f"shade {shade:2d} ({COLOR_NAMES[shade]}) code {code:02b}: "
              f"{count} pixels, bucket {size}")


def _open(name, factory, *args):
    try:
        return factory(*args)
    except OSError as exc:
        err = TransportError(f"cannot open {args[0][0]}:{args[0][1]}: {exc.strerror or exc}")
        err.channel = name
        raise err from exc


def cmd_send(args):
    image = _read(args.image)
    payload = _read(args.payload)
    channels = [_open(name, SocketChannel.connect, addr, args.timeout)
                for name, addr in (("a", args.addr_a), ("b", args.addr_b))]
    send_session(image, payload, *channels)


def cmd_recv(args):
    channel_a = _open("a", ListeningChannel, args.listen_a)
    channel_b = _open("b", ListeningChannel, args.listen_b)
    print("refstego: listening on {}:{} (image) and {}:{} (payload)".format(
        *channel_a.address, *channel_b.address), file=sys.stderr, flush=True)
    try:
        message = receive_session(channel_a, channel_b, args.timeout)
    finally:
        channel_a.close()
        channel_b.close()
    _write(args.output, message)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="refstego",
        description="Hide messages as coordinates into a 4-shade grey reference image.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def palette_flag(p):
        p.add_argument("--palette-mode", choices=[m.value for m in PaletteMode],
                       default=PaletteMode.MATCH_PALETTE.value,
                       help="match palette entries to CGA colours, or read indices "
                            "as colour numbers (default: match)")

    p = sub.add_parser("convert", help="write the 4-shade grey reference BMP")
    p.add_argument("input")
    p.add_argument("output")
    palette_flag(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("hide", help="encode a message as an RSTG payload")
    p.add_argument("reference")
    p.add_argument("-m", "--message", default="-", help="message file (default: stdin)")
    p.add_argument("-o", "--output", required=True, help="payload file to write")
    p.add_argument("--strategy", choices=["first", "random"], default="first")
    p.add_argument("--seed", type=int)
    palette_flag(p)
    p.set_defaults(func=cmd_hide)

    p = sub.add_parser("unhide", help="recover a message from reference + payload")
    p.add_argument("reference")
    p.add_argument("payload")
    p.add_argument("-o", "--output", default="-", help="message file (default: stdout)")
    palette_flag(p)
    p.set_defaults(func=cmd_unhide)

    p = sub.add_parser("inspect", help="describe a BMP or RSTG payload file")
    p.add_argument("path")
    palette_flag(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("send", help="send image and payload over two TCP connections")
    p.add_argument("image")
    p.add_argument("payload")
    p.add_argument("--addr-a", type=_address, required=True, help="HOST:PORT for the image")
    p.add_argument("--addr-b", type=_address, required=True, help="HOST:PORT for the payload")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    p.set_defaults(func=cmd_send)

    p = sub.add_parser("recv", help="receive on two TCP ports and decode")
    p.add_argument("--listen-a", type=_address, required=True)
    p.add_argument("--listen-b", type=_address, required=True)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    p.set_defaults(func=cmd_recv)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "hide":
        if args.strategy == "random" and args.seed is None:
            parser.error("--strategy random requires --seed")
        if args.strategy == "first" and args.seed is not None:
            parser.error("--seed only applies to --strategy random")
        if args.seed is not None and not 0 <= args.seed < 2**64:
            parser.error("--seed must be an unsigned 64-bit integer")
    try:
        args.func(args)
    except StegoError as exc:
        print(f"refstego: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"refstego: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
