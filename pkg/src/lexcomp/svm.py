"""RBF-kernel support vector machines trained with sequential minimal
optimization, plus the one-vs-one multiclass wrapper used for each
annotator-slot classifier.

The solver is the simplified SMO variant: first index swept in order, second
index drawn from a seeded generator, termination after `max_passes`
consecutive sweeps without an update (or earlier, once a full sweep finds no
point violating the KKT conditions beyond `tol`), with a hard cap of
10 * max_passes * n pair examinations. The full Gram matrix is cached for
n <= 4096 training points and computed on demand above that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TextIO

import numpy as np

GRAM_CACHE_LIMIT = 4096
_MIN_ALPHA_STEP = 1e-12


@dataclass(frozen=True)
class SvmParams:
    c_slack: float = 1.0
    gamma: float | None = None  # None resolves to 1 / (d * mean feature variance)
    tol: float = 1e-3
    max_passes: int = 100

    def __post_init__(self):
        if self.c_slack <= 0:
            raise ValueError(f"c_slack must be positive, got {self.c_slack}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes}")


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    diff = x - y
    return float(np.exp(-gamma * (diff @ diff)))


def _rbf_matrix(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise kernel values between the rows of a (m x d) and b (k x d)."""
    sq = (
        (a * a).sum(axis=1)[:, None]
        + (b * b).sum(axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def resolve_gamma(x: np.ndarray, gamma: float | None) -> float:
    """Explicit gamma, or 1/(d * var) where var is the mean per-component
    variance of the training features (1/d when that variance is zero)."""
    if gamma is not None:
        return float(gamma)
    x = np.asarray(x, dtype=float)
    d = x.shape[1]
    var = float(x.var(axis=0).mean())
    if var <= 0.0:
        return 1.0 / d
    return 1.0 / (d * var)


def smo_solve(
    x: np.ndarray,
    y: np.ndarray,
    gamma: float,
    params: SvmParams,
    seed: int = 0,
) -> tuple[np.ndarray, float]:
    """Solve the soft-margin dual for labels in {-1, +1}.

    Returns (alpha, bias) with 0 <= alpha_i <= C and, unless the examination
    cap was hit, every training point satisfying the KKT conditions within
    params.tol.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    if n < 2:
        return np.zeros(n), (float(y[0]) if n == 1 else 0.0)
    c = params.c_slack
    tol = params.tol
    rng = np.random.default_rng(seed)

    gram = _rbf_matrix(x, x, gamma) if n <= GRAM_CACHE_LIMIT else None

    def kernel_col(i: int) -> np.ndarray:
        if gram is not None:
            return gram[:, i]
        return _rbf_matrix(x, x[i : i + 1], gamma)[:, 0]

    alpha = np.zeros(n)
    bias = 0.0
    cap = 10 * params.max_passes * n
    examinations = 0
    passes = 0

    while passes < params.max_passes:
        num_changed = 0
        any_violation = False
        for i in range(n):
            col_i = kernel_col(i)
            err_i = float((alpha * y) @ col_i) + bias - y[i]
            r_i = y[i] * err_i
            if not ((r_i < -tol and alpha[i] < c) or (r_i > tol and alpha[i] > 0)):
                continue
            any_violation = True
            if examinations >= cap:
                return alpha, float(bias)
            examinations += 1

            j = int(rng.integers(n - 1))
            if j >= i:
                j += 1
            col_j = kernel_col(j)
            err_j = float((alpha * y) @ col_j) + bias - y[j]

            ai_old, aj_old = alpha[i], alpha[j]
            if y[i] != y[j]:
                lo = max(0.0, aj_old - ai_old)
                hi = min(c, c + aj_old - ai_old)
            else:
                lo = max(0.0, ai_old + aj_old - c)
                hi = min(c, ai_old + aj_old)
            if lo >= hi:
                continue

            k_ii = col_i[i]
            k_jj = col_j[j]
            k_ij = col_i[j]
            eta = 2.0 * k_ij - k_ii - k_jj
            if eta >= 0:
                continue

            aj = aj_old - y[j] * (err_i - err_j) / eta
            aj = min(hi, max(lo, aj))
            if abs(aj - aj_old) < _MIN_ALPHA_STEP:
                continue
            ai = ai_old + y[i] * y[j] * (aj_old - aj)
            ai = min(c, max(0.0, ai))

            b1 = (
                bias
                - err_i
                - y[i] * (ai - ai_old) * k_ii
                - y[j] * (aj - aj_old) * k_ij
            )
            b2 = (
                bias
                - err_j
                - y[i] * (ai - ai_old) * k_ij
                - y[j] * (aj - aj_old) * k_jj
            )
            alpha[i], alpha[j] = ai, aj
            if 0.0 < ai < c:
                bias = b1
            elif 0.0 < aj < c:
                bias = b2
            else:
                bias = (b1 + b2) / 2.0
            num_changed += 1

        if not any_violation:
            break
        passes = passes + 1 if num_changed == 0 else 0

    return alpha, float(bias)


@dataclass(frozen=True)
class BinarySvm:
    support_vectors: np.ndarray  # m x d
    dual_coefs: np.ndarray       # m, each y_i * alpha_i
    bias: float
    gamma: float

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]


def train_binary(
    x: np.ndarray, y: np.ndarray, params: SvmParams, seed: int = 0
) -> BinarySvm:
    """Train a soft-margin binary SVM on labels in {-1, +1}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"features must be a matrix, got shape {x.shape}")
    if x.shape[0] != y.shape[0]:
        raise ValueError(
            f"feature/label count mismatch: {x.shape[0]} vs {y.shape[0]}"
        )
    if x.shape[0] < 2:
        raise ValueError("need at least 2 training points")
    if set(np.unique(y)) != {-1.0, 1.0}:
        raise ValueError("labels must contain both classes, encoded as -1/+1")

    gamma = resolve_gamma(x, params.gamma)
    alpha, bias = smo_solve(x, y, gamma, params, seed=seed)

    kept = alpha > 0
    return BinarySvm(
        support_vectors=x[kept].copy(),
        dual_coefs=(alpha * y)[kept],
        bias=bias,
        gamma=gamma,
    )


def decision(model: BinarySvm, x: np.ndarray) -> float:
    """sum_i dual_coef_i * k(sv_i, x) + bias."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise ValueError(f"expected a vector of length {model.dim}, got {x.shape}")
    k = _rbf_matrix(model.support_vectors, x[None, :], model.gamma)[:, 0]
    return float(model.dual_coefs @ k) + model.bias


@dataclass(frozen=True)
class MulticlassSvm:
    """One-vs-one machines over all class pairs present in the training labels."""

    classes: tuple[int, ...]                     # ascending
    machines: tuple[tuple[int, int, BinarySvm], ...]  # (lower, upper, machine)
    gamma: float
    c_slack: float

    @property
    def is_constant(self) -> bool:
        return len(self.classes) == 1


def train_multiclass(
    x: np.ndarray, labels, params: SvmParams, seed: int = 0
) -> MulticlassSvm:
    """Train one binary machine per unordered pair of classes present in labels.

    A single-class input yields a constant predictor of that class. The pair
    machine for (a, b) maps a to +1 and b to -1.
    """
    x = np.asarray(x, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if x.shape[0] == 0:
        raise ValueError("empty training set")
    if x.shape[0] != labels.shape[0]:
        raise ValueError(
            f"feature/label count mismatch: {x.shape[0]} vs {labels.shape[0]}"
        )

    classes = tuple(int(v) for v in np.unique(labels))
    gamma = resolve_gamma(x, params.gamma)
    fixed = SvmParams(
        c_slack=params.c_slack, gamma=gamma, tol=params.tol, max_passes=params.max_passes
    )

    machines = []
    pair_index = 0
    for ai, a in enumerate(classes):
        for b in classes[ai + 1 :]:
            mask = (labels == a) | (labels == b)
            y = np.where(labels[mask] == a, 1.0, -1.0)
            machine = train_binary(x[mask], y, fixed, seed=seed + pair_index)
            machines.append((a, b, machine))
            pair_index += 1

    return MulticlassSvm(
        classes=classes, machines=tuple(machines), gamma=gamma, c_slack=params.c_slack
    )


def predict_class(model: MulticlassSvm, x: np.ndarray) -> int:
    """Majority vote over the pairwise machines; vote ties go to the lowest
    class id among the tied classes."""
    if model.is_constant:
        return model.classes[0]
    votes = {cls: 0 for cls in model.classes}
    for a, b, machine in model.machines:
        votes[a if decision(machine, x) > 0 else b] += 1
    best = max(votes.values())
    return min(cls for cls, v in votes.items() if v == best)


def save_multiclass(model: MulticlassSvm, stream: TextIO) -> None:
    doc = {
        "classes": list(model.classes),
        "gamma": float(model.gamma),
        "c_slack": float(model.c_slack),
        "machines": [
            {
                "pair": [a, b],
                "support_vectors": machine.support_vectors.tolist(),
                "dual_coefs": machine.dual_coefs.tolist(),
                "bias": float(machine.bias),
            }
            for a, b, machine in model.machines
        ],
    }
    json.dump(doc, stream)


def load_multiclass(stream: TextIO) -> MulticlassSvm:
    doc = json.load(stream)
    machines = tuple(
        (
            int(m["pair"][0]),
            int(m["pair"][1]),
            BinarySvm(
                support_vectors=np.array(m["support_vectors"], dtype=float),
                dual_coefs=np.array(m["dual_coefs"], dtype=float),
                bias=float(m["bias"]),
                gamma=float(doc["gamma"]),
            ),
        )
        for m in doc["machines"]
    )
    return MulticlassSvm(
        classes=tuple(int(c) for c in doc["classes"]),
        machines=machines,
        gamma=float(doc["gamma"]),
        c_slack=float(doc["c_slack"]),
    )
