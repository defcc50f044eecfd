"""CompLex-style TSV instance files: parsing, validation, round-trip writing.

Rows are plain tab-separated fields (id, corpus, sentence, token and an
optional complexity column); sentences may contain any character except
tab or newline, and no unescaping is performed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, TextIO

import numpy as np

HEADER_FIELDS = ("id", "corpus", "sentence", "token", "complexity")


class Corpus(str, Enum):
    BIBLE = "bible"
    BIOMED = "biomed"
    EUROPARL = "europarl"
    OTHER = "other"

    @classmethod
    def parse(cls, text: str) -> "Corpus":
        # unknown corpus tags are informational only, not an error
        try:
            return cls(text.strip().lower())
        except ValueError:
            return cls.OTHER


class Subtask(str, Enum):
    SINGLE = "single"  # 1-word targets
    MWE = "mwe"        # 2-word targets

    @property
    def word_count(self) -> int:
        return 1 if self is Subtask.SINGLE else 2


@dataclass(frozen=True)
class Instance:
    """One (sentence, target token, optional gold complexity) record."""

    id: str
    corpus: Corpus
    sentence: str
    target: str
    gold: float | None = None

    def __post_init__(self):
        if not self.sentence:
            raise ValueError(f"instance {self.id!r}: empty sentence")
        n_words = len(self.target.split())
        if n_words not in (1, 2):
            raise ValueError(
                f"instance {self.id!r}: target must have 1 or 2 words, "
                f"got {n_words} ({self.target!r})"
            )
        if self.gold is not None and not 0.0 <= self.gold <= 1.0:
            raise ValueError(
                f"instance {self.id!r}: complexity {self.gold} outside [0, 1]"
            )

    @property
    def subtask(self) -> Subtask:
        return Subtask.SINGLE if len(self.target.split()) == 1 else Subtask.MWE


@dataclass(frozen=True)
class Dataset:
    instances: tuple[Instance, ...]
    subtask: Subtask

    def __post_init__(self):
        seen = set()
        for inst in self.instances:
            if inst.id in seen:
                raise ValueError(f"duplicate instance id {inst.id!r}")
            seen.add(inst.id)
            if inst.subtask is not self.subtask:
                raise ValueError(
                    f"instance {inst.id!r}: {inst.subtask.value} target in a "
                    f"{self.subtask.value} dataset"
                )

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    @classmethod
    def from_instances(cls, instances: Iterable[Instance]) -> "Dataset":
        insts = tuple(instances)
        if not insts:
            raise ValueError("cannot infer subtask of an empty dataset")
        return cls(instances=insts, subtask=insts[0].subtask)

    def gold_array(self) -> np.ndarray:
        if any(inst.gold is None for inst in self.instances):
            raise ValueError("dataset has unlabeled instances")
        return np.array([inst.gold for inst in self.instances], dtype=float)


def _is_float(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def _looks_like_header(fields: list[str], has_labels: bool) -> bool:
    if has_labels:
        return not _is_float(fields[-1])
    return tuple(f.strip().lower() for f in fields) == HEADER_FIELDS[:4]


def parse_complex_tsv(stream: TextIO, has_labels: bool) -> Dataset:
    """Parse a TSV stream into a Dataset, one Instance per non-header row.

    The subtask (single word vs two-word expression) is inferred from the
    first data row and enforced on the rest. Raises ValueError naming the
    offending row for malformed rows, out-of-range complexity scores,
    mixed target widths, and duplicate ids.
    """
    expected = 5 if has_labels else 4
    instances: list[Instance] = []
    seen_ids: set[str] = set()
    subtask: Subtask | None = None
    first_row = True

    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != expected:
            raise ValueError(
                f"row {lineno}: expected {expected} tab-separated columns, "
                f"got {len(fields)}"
            )
        if first_row:
            first_row = False
            if _looks_like_header(fields, has_labels):
                continue

        ident, corpus_tag, sentence, target = fields[:4]
        gold = None
        if has_labels:
            if not _is_float(fields[4]):
                raise ValueError(f"row {lineno}: complexity {fields[4]!r} is not a number")
            gold = float(fields[4])
            if not 0.0 <= gold <= 1.0:
                raise ValueError(f"row {lineno}: complexity {gold} outside [0, 1]")

        if ident in seen_ids:
            raise ValueError(f"row {lineno}: duplicate id {ident!r}")
        seen_ids.add(ident)

        try:
            inst = Instance(
                id=ident,
                corpus=Corpus.parse(corpus_tag),
                sentence=sentence,
                target=target,
                gold=gold,
            )
        except ValueError as exc:
            raise ValueError(f"row {lineno}: {exc}") from None

        if subtask is None:
            subtask = inst.subtask
        elif inst.subtask is not subtask:
            raise ValueError(
                f"row {lineno}: {inst.subtask.value} target in a file of "
                f"{subtask.value} targets"
            )
        instances.append(inst)

    return Dataset(instances=tuple(instances), subtask=subtask or Subtask.SINGLE)


def format_score(value: float) -> str:
    """Shortest decimal form of value that round-trips, padded to >= 6 decimals."""
    text = np.format_float_positional(float(value), unique=True, trim="0")
    if "." not in text:
        text += "."
    whole, frac = text.split(".")
    return f"{whole}.{frac.ljust(6, '0')}"


def write_tsv(dataset: Dataset, stream: TextIO, include_labels: bool) -> None:
    """Write dataset as TSV; parse_complex_tsv(write_tsv(D)) reproduces D."""
    n_cols = 5 if include_labels else 4
    stream.write("\t".join(HEADER_FIELDS[:n_cols]) + "\n")
    for inst in dataset:
        fields = [inst.id, inst.corpus.value, inst.sentence, inst.target]
        if include_labels:
            if inst.gold is None:
                raise ValueError(f"instance {inst.id!r} has no complexity to write")
            fields.append(format_score(inst.gold))
        stream.write("\t".join(fields) + "\n")
