"""Command-line entry point: TSV in, contextual-embedding JSON Lines out."""

from __future__ import annotations

import argparse
import logging
import sys

from .encode import export_rows, load_encoder
from .rows import read_rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexcomp-export",
        description="Encode sentences with a pretrained transformer and emit "
        "per-sub-token vectors as JSON Lines.",
    )
    parser.add_argument("--in", required=True, dest="input", help="input TSV")
    parser.add_argument("--out", required=True, dest="output", help="output JSONL")
    parser.add_argument("--model", required=True, help="encoder name or local path")
    parser.add_argument("--max-length", type=int, default=140,
                        help="sub-token truncation length (default 140)")
    parser.add_argument("--signal", action="store_true",
                        help="quote the target in-sentence before encoding")
    parser.add_argument("--layer", type=int, default=-1,
                        help="hidden-state index to export (default -1, the last layer)")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    if args.max_length < 3:  # two specials plus at least one real token
        print("error: --max-length must be at least 3", file=sys.stderr)
        return 1

    try:
        tokenizer, model = load_encoder(args.model)
    except Exception as exc:  # transformers raises a zoo of exception types
        print(f"error: cannot load encoder {args.model!r}: {exc}", file=sys.stderr)
        return 1

    sidecar = args.output + ".skipped"
    try:
        with open(args.input, encoding="utf-8") as fh:
            rows = list(read_rows(fh))
        with open(args.output, "w", encoding="utf-8") as out, \
                open(sidecar, "w", encoding="utf-8") as skip_log:
            stats = export_rows(
                rows, tokenizer, model, out, skip_log,
                max_length=args.max_length,
                apply_signal=args.signal,
                layer=args.layer,
            )
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"{stats.written} records written to {args.output}, "
          f"{stats.skipped} rows skipped (see {sidecar})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
