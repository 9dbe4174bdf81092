"""CLI: encode a clean-records file into a binary embedding matrix."""

from __future__ import annotations

import argparse
import sys

from .encoder import DEFAULT_MODEL, EncoderError, encode_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed",
        description="Encode cleaned documents with a sentence-embedding model",
    )
    parser.add_argument("--input", required=True, help="clean records (JSON Lines)")
    parser.add_argument(
        "--model",
        default=DEFAULT_MODEL,
        help=f"model checkpoint name, or hash:<dim> (default {DEFAULT_MODEL})",
    )
    parser.add_argument("--normalize", action="store_true", help="L2-normalize rows")
    parser.add_argument("--batch-size", type=int, default=64)
    parser.add_argument("--out", required=True, help="output embedding file")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        n, dim = encode_file(
            args.input,
            args.model,
            args.out,
            normalize=args.normalize,
            batch_size=args.batch_size,
        )
    except EncoderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"encoded {n} documents at dim {dim} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
