"""Static word vectors (GloVe text format) and precomputed contextual embeddings.

Both stores are immutable after loading; every lookup is read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .align import Span, kmp_find, mean_pool


@dataclass(frozen=True)
class WordVecStore:
    """Word -> fixed-dimension vector map; unknown words resolve to zeros."""

    dim: int = 200
    table: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")

    def word_vector(self, word: str) -> np.ndarray:
        # exact match first, lowercase fallback second (GloVe vocabularies
        # are lowercase), zeros when the word is absent altogether
        vec = self.table.get(word)
        if vec is None:
            vec = self.table.get(word.lower())
        if vec is None:
            return np.zeros(self.dim)
        return vec.copy()


def load_glove(stream: TextIO, dim: int = 200) -> WordVecStore:
    """Read `word v1 ... v_dim` lines; later duplicate words overwrite earlier."""
    table: dict[str, np.ndarray] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        parts = line.split(" ")
        if len(parts) != dim + 1:
            raise ValueError(
                f"line {lineno}: expected word + {dim} components, got {len(parts) - 1}"
            )
        try:
            vec = np.array([float(p) for p in parts[1:]], dtype=float)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        table[parts[0]] = vec
    return WordVecStore(dim=dim, table=table)


def lookup_token(store: WordVecStore, target: str) -> np.ndarray:
    """Vector for a 1-word target, or the mean of both word vectors for a 2-word one."""
    words = target.split()
    if len(words) == 0:
        raise ValueError("empty target")
    if len(words) > 2:
        raise ValueError(f"target must have 1 or 2 words, got {len(words)}")
    if len(words) == 1:
        return store.word_vector(words[0])
    return (store.word_vector(words[0]) + store.word_vector(words[1])) / 2.0


@dataclass(frozen=True)
class CtxEmbeddingRecord:
    """Sub-token strings plus one embedding row per sub-token for one instance."""

    id: str
    tokens: tuple[str, ...]
    vectors: np.ndarray  # |tokens| x d
    target_tokens: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.vectors.ndim != 2:
            raise ValueError(f"record {self.id!r}: vectors must be a matrix")
        if self.vectors.shape[0] != len(self.tokens):
            raise ValueError(
                f"record {self.id!r}: {len(self.tokens)} tokens but "
                f"{self.vectors.shape[0]} vector rows"
            )


@dataclass(frozen=True)
class CtxStore:
    dim: int
    records: dict[str, CtxEmbeddingRecord]


def load_contextual(stream: TextIO) -> CtxStore:
    """Parse JSON Lines records {id, tokens, vectors[, target_tokens]} into a CtxStore.

    All records must share one embedding dimension and have unique ids.
    """
    records: dict[str, CtxEmbeddingRecord] = {}
    dim: int | None = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValueError(f"line {lineno}: malformed JSON ({exc})") from None
        try:
            ident = str(obj["id"])
            tokens = tuple(str(t) for t in obj["tokens"])
            rows = obj["vectors"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"line {lineno}: missing or malformed field ({exc})") from None

        if len(rows) != len(tokens):
            raise ValueError(
                f"line {lineno}: {len(tokens)} tokens but {len(rows)} vector rows"
            )
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError(f"line {lineno}: ragged vector rows {sorted(widths)}")
        row_dim = widths.pop() if widths else 0
        if row_dim == 0:
            raise ValueError(f"line {lineno}: empty vectors")
        if dim is None:
            dim = row_dim
        elif row_dim != dim:
            raise ValueError(
                f"line {lineno}: dimension {row_dim} does not match store dimension {dim}"
            )
        if ident in records:
            raise ValueError(f"line {lineno}: duplicate id {ident!r}")

        target_tokens = obj.get("target_tokens")
        if target_tokens is not None:
            target_tokens = tuple(str(t) for t in target_tokens)
        records[ident] = CtxEmbeddingRecord(
            id=ident,
            tokens=tokens,
            vectors=np.array(rows, dtype=float),
            target_tokens=target_tokens,
        )
    return CtxStore(dim=dim or 0, records=records)


def context_vector(store: CtxStore, ident: str, needle: list[str] | tuple[str, ...]) -> np.ndarray:
    """Mean embedding of the first occurrence of needle in the record's sub-tokens."""
    record = store.records.get(ident)
    if record is None:
        raise KeyError(f"no contextual record for id {ident!r}")
    span = kmp_find(record.tokens, needle)
    if span is None:
        raise ValueError(
            f"record {ident!r}: sub-tokens {list(needle)!r} not found"
        )
    return mean_pool(record.vectors, span)
