"""Minimal TSV reading for the export tool.

Accepts the labeled (5-column) and unlabeled (4-column) layouts; only id,
sentence, and target are consumed here, so the complexity column passes
through unchecked. Deliberately self-contained: this package never imports
the consumer side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, TextIO

_HEADER_STARTS = ("id\tcorpus\tsentence\ttoken",)


@dataclass(frozen=True)
class Row:
    id: str
    sentence: str
    target: str


def read_rows(stream: TextIO) -> Iterator[Row]:
    first_row = True
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if first_row:
            first_row = False
            if any(line.startswith(h) for h in _HEADER_STARTS):
                continue
        fields = line.split("\t")
        if len(fields) not in (4, 5):
            raise ValueError(
                f"row {lineno}: expected 4 or 5 tab-separated columns, got {len(fields)}"
            )
        ident, _, sentence, target = fields[:4]
        if not ident or not sentence or not target:
            raise ValueError(f"row {lineno}: empty id, sentence, or target")
        yield Row(id=ident, sentence=sentence, target=target)
