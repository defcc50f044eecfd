"""Weak supervision markup: wrap the target in single quotes in-sentence.

Whole-word occurrences are preferred over substring hits so a target like
"cat" lands on the standalone word, not inside "category".
"""

from __future__ import annotations


def _whole_word_span(sentence: str, target: str) -> tuple[int, int] | None:
    words = target.split()
    tokens = sentence.split()
    offsets = []
    pos = 0
    for tok in tokens:
        start = sentence.index(tok, pos)
        offsets.append(start)
        pos = start + len(tok)
    for i in range(len(tokens) - len(words) + 1):
        if tokens[i : i + len(words)] == words:
            start = offsets[i]
            end = offsets[i + len(words) - 1] + len(words[-1])
            return start, end
    return None


def wrap_target(sentence: str, target: str) -> str | None:
    """Sentence with the first occurrence of target quoted, or None if absent."""
    span = _whole_word_span(sentence, target)
    if span is None:
        start = sentence.find(target)
        if start < 0:
            return None
        span = (start, start + len(target))
    start, end = span
    return sentence[:start] + "'" + sentence[start:end] + "'" + sentence[end:]
