"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 bench cell failure.
Set ``WMBENCH_LOG`` to ``debug``, ``info`` or ``warning`` (default) for
log verbosity on stderr.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
import warnings

from . import __version__, metrics, schemes
from .attacks import AttackSpec, BrightnessMode, parse_brightness, parse_rotation
from .bench import ConfigError, load_config, run_bench, threshold_watermark_image, watermark_to_image
from .image import PgmError, read_pgm, write_pgm
from .prng import parse_key
from .schemes import SchemeId

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CELL = 0, 1, 2, 3

log = logging.getLogger("wmbench")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scheme(text: str) -> SchemeId:
    try:
        return SchemeId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _key(text: str) -> int:
    try:
        return parse_key(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2 or not all(p.isdigit() and int(p) > 0 for p in parts):
        raise argparse.ArgumentTypeError(f"invalid size {text!r}: expected ROWSxCOLS, e.g. 8x8")
    return int(parts[0]), int(parts[1])


def _fmt_db(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def cmd_embed(args) -> int:
    cover = read_pgm(args.cover)
    bits = threshold_watermark_image(read_pgm(args.watermark))
    if args.scheme is SchemeId.DCT and bits.size > schemes.dct_capacity(cover.shape):
        raise UsageError(
            f"watermark has {bits.size} bits but the cover has only "
            f"{schemes.dct_capacity(cover.shape)} 8x8 blocks"
        )
    gain = schemes.DEFAULT_GAINS[args.scheme] if args.k is None else args.k
    marked = schemes.embed(args.scheme, cover, bits, args.key, gain)
    write_pgm(args.output, marked)
    print(f"psnr_db={_fmt_db(metrics.psnr(cover, marked))}")
    return EXIT_OK


def cmd_extract(args) -> int:
    img = read_pgm(args.image)
    reference = threshold_watermark_image(read_pgm(args.reference)) if args.reference else None
    size = args.size
    if size is None:
        if args.scheme.keyed or reference is None:
            raise UsageError(f"--size is required for the {args.scheme.value} scheme")
        size = reference.shape
    bits = schemes.extract(args.scheme, img, args.key, size)
    write_pgm(args.output, watermark_to_image(bits))
    if reference is not None:
        print(f"ber={metrics.ber(reference, bits):.6f}")
    return EXIT_OK


def cmd_attack(args) -> int:
    specs = []
    for level in args.brightness or []:
        specs.append(AttackSpec.brightness(parse_brightness(level), args.mode))
    for degrees in args.rotate or []:
        specs.append(AttackSpec.rotation(parse_rotation(degrees)))
    if not specs:
        raise UsageError("give at least one of --brightness or --rotate")
    img = read_pgm(args.input)
    for spec in specs:
        img = spec.apply(img)
    write_pgm(args.output, img)
    return EXIT_OK


def cmd_metrics(args) -> int:
    a = read_pgm(args.first)
    b = read_pgm(args.second)
    print(f"psnr_db={_fmt_db(metrics.psnr(a, b))}")
    print(f"rmse={metrics.rmse(a, b):.6f}")
    print(f"mae={metrics.mae(a, b):.6f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    config = load_config(args.config)
    if args.output_dir:
        config.output_dir = args.output_dir
    report = run_bench(config)
    for path in report.write(config.output_dir):
        log.info("wrote %s", path)
    print(f"{len(report.rows)} rows written to {config.output_dir}")
    return EXIT_CELL if report.failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wmbench", description="Image watermarking schemes and robustness bench.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="embed a watermark into a cover image")
    p.add_argument("--scheme", type=_scheme, required=True, help="spatial, dct or dwt")
    p.add_argument("--k", type=float, default=None, help="gain (default depends on scheme)")
    p.add_argument("--key", type=_key, default=0, help="master key, decimal or 0x-hex")
    p.add_argument("cover")
    p.add_argument("watermark", help="watermark graymap, thresholded at 128")
    p.add_argument("output")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a watermark from an image")
    p.add_argument("--scheme", type=_scheme, required=True)
    p.add_argument("--key", type=_key, default=0)
    p.add_argument("--size", type=_size, default=None, help="watermark ROWSxCOLS")
    p.add_argument("--reference", default=None, help="original watermark graymap; prints BER")
    p.add_argument("image")
    p.add_argument("output", help="recovered watermark graymap (0 -> 0, 1 -> 255)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply brightness and/or rotation attacks")
    p.add_argument("--brightness", action="append", help="level such as -25%%, +50%% or 0.25")
    p.add_argument("--rotate", action="append", help="clockwise degrees: 90, 180 or 270")
    p.add_argument("--mode", type=BrightnessMode, default=BrightnessMode.ADDITIVE,
                   choices=list(BrightnessMode), help="brightness mode")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("metrics", help="PSNR, RMSE and MAE between two images")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="run the scheme x attack matrix from a config file")
    p.add_argument("config")
    p.add_argument("--output-dir", default=None, help="override output_dir from the config")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("WMBENCH_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, cat, *a, **k: log.warning("%s", msg)
            return args.func(args)
    except (OSError, PgmError) as exc:
        print(f"wmbench {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ConfigError, ValueError) as exc:
        print(f"wmbench {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
