"""Token-sequence alignment: KMP search, span pooling, and the quoting signal."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Span:
    """Contiguous region [start, start+len) inside a token sequence."""

    start: int
    len: int

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f"span start must be >= 0, got {self.start}")
        if self.len < 1:
            raise ValueError(f"span len must be >= 1, got {self.len}")

    @property
    def stop(self) -> int:
        return self.start + self.len


def _failure_table(needle: Sequence[str]) -> list[int]:
    """Longest proper prefix of needle[:i+1] that is also a suffix."""
    table = [0] * len(needle)
    k = 0
    for i in range(1, len(needle)):
        while k > 0 and needle[i] != needle[k]:
            k = table[k - 1]
        if needle[i] == needle[k]:
            k += 1
        table[i] = k
    return table


def kmp_find(haystack: Sequence[str], needle: Sequence[str]) -> Span | None:
    """First occurrence of needle as a contiguous run inside haystack.

    Tokens are compared with exact string equality. Runs in
    O(len(haystack) + len(needle)) via the KMP failure table.
    Returns None when there is no match.
    """
    if len(needle) == 0:
        raise ValueError("needle must be non-empty")
    table = _failure_table(needle)
    k = 0
    for i, tok in enumerate(haystack):
        while k > 0 and tok != needle[k]:
            k = table[k - 1]
        if tok == needle[k]:
            k += 1
        if k == len(needle):
            return Span(start=i - k + 1, len=len(needle))
    return None


def mean_pool(matrix: np.ndarray, span: Span) -> np.ndarray:
    """Componentwise mean of the matrix rows covered by span."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {matrix.shape}")
    if span.stop > matrix.shape[0]:
        raise ValueError(
            f"span [{span.start}, {span.stop}) out of range for {matrix.shape[0]} rows"
        )
    return matrix[span.start : span.stop].mean(axis=0)


def locate_target(sentence: str, target: str) -> tuple[int, int, bool]:
    """Character span of the first occurrence of target inside sentence.

    Tries whole-word matching first: the target's whitespace-separated words
    must appear as consecutive whitespace-delimited words of the sentence.
    Falls back to a plain substring match (flagged via the returned bool and
    a log warning). Returns (start, end, whole_word).

    Raises ValueError when the target cannot be located either way.
    """
    words = target.split()
    if not words:
        raise ValueError("target must be non-empty")

    sent_words = []  # (word, char_start, char_end)
    pos = 0
    for w in sentence.split():
        start = sentence.index(w, pos)
        sent_words.append((w, start, start + len(w)))
        pos = start + len(w)

    for i in range(len(sent_words) - len(words) + 1):
        if all(sent_words[i + j][0] == words[j] for j in range(len(words))):
            return sent_words[i][1], sent_words[i + len(words) - 1][2], True

    idx = sentence.find(target)
    if idx >= 0:
        logger.warning(
            "target %r matched only as a substring of %r", target, sentence
        )
        return idx, idx + len(target), False

    raise ValueError(f"target {target!r} not found in sentence {sentence!r}")


def apply_weak_signal(sentence: str, target: str) -> str:
    """Wrap the first occurrence of target in single ASCII apostrophes.

    All other characters are preserved, so the output is exactly two
    characters longer than the input.
    """
    start, end, _ = locate_target(sentence, target)
    return sentence[:start] + "'" + sentence[start:end] + "'" + sentence[end:]
