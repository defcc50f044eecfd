"""Evaluation metrics: MAE, MSE, Pearson correlation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


def _paired(pred, gold) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred, dtype=float)
    g = np.asarray(gold, dtype=float)
    if p.shape != g.shape or p.ndim != 1:
        raise ValueError(f"length mismatch: {p.shape} vs {g.shape}")
    if p.size == 0:
        raise ValueError("empty series")
    return p, g


def mae(pred, gold) -> float:
    """Mean absolute error."""
    p, g = _paired(pred, gold)
    return float(np.mean(np.abs(p - g)))


def mse(pred, gold) -> float:
    """Mean squared error (1/n normalization)."""
    p, g = _paired(pred, gold)
    return float(np.mean((p - g) ** 2))


def pearson(pred, gold) -> float:
    """Sample Pearson correlation; raises on constant series instead of
    propagating NaN."""
    p, g = _paired(pred, gold)
    if p.size < 2:
        raise ValueError("pearson needs at least 2 samples")
    dp = p - p.mean()
    dg = g - g.mean()
    sp = math.sqrt(float(dp @ dp))
    sg = math.sqrt(float(dg @ dg))
    if sp == 0.0 or sg == 0.0:
        raise ValueError("pearson undefined for a zero-variance series")
    return float(dp @ dg) / (sp * sg)


@dataclass(frozen=True)
class MetricsReport:
    mae: float
    mse: float
    pearson: float
    n: int

    @classmethod
    def from_series(cls, pred, gold) -> "MetricsReport":
        p, g = _paired(pred, gold)
        return cls(mae=mae(p, g), mse=mse(p, g), pearson=pearson(p, g), n=p.size)

    def as_tsv(self) -> str:
        header = "mae\tmse\tpearson\tn"
        row = f"{self.mae:.6f}\t{self.mse:.6f}\t{self.pearson:.6f}\t{self.n}"
        return header + "\n" + row + "\n"

    def as_json(self) -> str:
        return json.dumps(
            {"mae": self.mae, "mse": self.mse, "pearson": self.pearson, "n": self.n}
        )
