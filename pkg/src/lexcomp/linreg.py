"""Ridge-regularized linear regression over embedding features.

Solved in closed form by the normal equations with an unpenalized intercept;
predictions are clamped to [0, 1] because complexity scores are bounded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TextIO

import numpy as np


@dataclass(frozen=True)
class LinModel:
    weights: np.ndarray
    intercept: float
    lambda_: float

    @property
    def dim(self) -> int:
        return self.weights.shape[0]


def fit(x: np.ndarray, y: np.ndarray, lambda_: float = 1e-6) -> LinModel:
    """Minimize ||X w + b - y||^2 + lambda * ||w||^2 (b unpenalized)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"features must be a matrix, got shape {x.shape}")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"feature/label count mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 1:
        raise ValueError("need at least 1 training sample")
    if lambda_ < 0:
        raise ValueError(f"lambda must be non-negative, got {lambda_}")

    n, d = x.shape
    design = np.hstack([x, np.ones((n, 1))])
    normal = design.T @ design
    ridge = lambda_ * np.eye(d + 1)
    ridge[d, d] = 0.0  # intercept stays unpenalized
    lhs = normal + ridge
    rhs = design.T @ y

    if lambda_ == 0.0 and np.linalg.matrix_rank(lhs) < d + 1:
        raise ValueError(
            "singular system: features are rank-deficient and lambda is 0"
        )
    try:
        solution = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular system: {exc}") from None

    return LinModel(weights=solution[:d], intercept=float(solution[d]), lambda_=lambda_)


def predict(model: LinModel, x: np.ndarray) -> float:
    """clamp(w . x + b, 0, 1)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise ValueError(f"expected a vector of length {model.dim}, got {x.shape}")
    raw = float(model.weights @ x) + model.intercept
    return min(1.0, max(0.0, raw))


def save_model(model: LinModel, stream: TextIO) -> None:
    json.dump(
        {
            "weights": model.weights.tolist(),
            "intercept": model.intercept,
            "lambda": model.lambda_,
        },
        stream,
    )


def load_model(stream: TextIO) -> LinModel:
    doc = json.load(stream)
    return LinModel(
        weights=np.array(doc["weights"], dtype=float),
        intercept=float(doc["intercept"]),
        lambda_=float(doc["lambda"]),
    )
