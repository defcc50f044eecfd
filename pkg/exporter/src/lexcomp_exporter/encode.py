"""Run a pretrained encoder over sentences and emit per-sub-token vectors.

One JSON Lines record per surviving input row:

    {"id": ..., "tokens": [...], "vectors": [[...]], "target_tokens": [...]}

Rows whose target cannot be located among the encoded sub-tokens (missing
from the sentence, or pushed out by truncation) are skipped and listed in a
sidecar log so the consumer can report coverage.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Sequence, TextIO

import torch

from .rows import Row
from .signal import wrap_target

logger = logging.getLogger(__name__)

BATCH_SIZE = 32


def load_encoder(name: str):
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(name)
    model = AutoModel.from_pretrained(name)
    model.eval()
    return tokenizer, model


def find_subsequence(tokens: Sequence[str], needle: Sequence[str]) -> int | None:
    """Start index of the first occurrence of needle, or None."""
    n, m = len(tokens), len(needle)
    if m == 0:
        return None
    for start in range(n - m + 1):
        if list(tokens[start : start + m]) == list(needle):
            return start
    return None


@dataclass
class ExportStats:
    written: int = 0
    skipped: int = 0


def _resolve_layer(n_layers: int, layer: int) -> int:
    if not -n_layers <= layer < n_layers:
        raise ValueError(f"layer {layer} out of range for {n_layers} hidden states")
    return layer % n_layers


def export_rows(
    rows: Sequence[Row],
    tokenizer,
    model,
    out: TextIO,
    skip_log: TextIO,
    max_length: int = 140,
    apply_signal: bool = False,
    layer: int = -1,
) -> ExportStats:
    stats = ExportStats()

    def skip(row: Row, reason: str) -> None:
        stats.skipped += 1
        skip_log.write(f"{row.id}\t{reason}\n")
        logger.warning("skipping %s: %s", row.id, reason)

    pending: list[tuple[Row, str, list[str]]] = []
    for row in rows:
        sentence = row.sentence
        if apply_signal:
            marked = wrap_target(sentence, row.target)
            if marked is None:
                skip(row, "target not found in sentence")
                continue
            sentence = marked
        target_tokens = tokenizer.tokenize(row.target)
        if not target_tokens:
            skip(row, "target tokenizes to nothing")
            continue
        pending.append((row, sentence, target_tokens))

    for start in range(0, len(pending), BATCH_SIZE):
        batch = pending[start : start + BATCH_SIZE]
        enc = tokenizer(
            [sentence for _, sentence, _ in batch],
            padding=True,
            truncation=True,
            max_length=max_length,
            return_tensors="pt",
        )
        with torch.no_grad():
            output = model(**enc, output_hidden_states=True)
        states = output.hidden_states
        hidden = states[_resolve_layer(len(states), layer)]

        for i, (row, _, target_tokens) in enumerate(batch):
            length = int(enc["attention_mask"][i].sum())
            tokens = tokenizer.convert_ids_to_tokens(enc["input_ids"][i][:length])
            if find_subsequence(tokens, target_tokens) is None:
                skip(row, "target sub-tokens not inside the encoded window")
                continue
            record = {
                "id": row.id,
                "tokens": tokens,
                "vectors": hidden[i, :length].tolist(),
                "target_tokens": target_tokens,
            }
            out.write(json.dumps(record) + "\n")
            stats.written += 1

    return stats
