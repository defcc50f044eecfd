"""Contextual embedding export: pretrained encoder -> JSON Lines."""

from .encode import ExportStats, export_rows, find_subsequence, load_encoder
from .rows import Row, read_rows
from .signal import wrap_target

__version__ = "0.1.0"

__all__ = [
    "ExportStats",
    "Row",
    "export_rows",
    "find_subsequence",
    "load_encoder",
    "read_rows",
    "wrap_target",
]
