"""Dummy annotation sets: from a continuous complexity score to n sorted
grid labels that average back to (approximately) the score, and the inverse
aggregation.

A score c inside a grid cell [low, high] is split as c = alpha*low +
(1-alpha)*high; floor(n*alpha) simulated annotators vote low and the rest
vote high. A small fraction rho of the slots is then re-assigned uniformly
at random over the whole grid to mimic careless annotators, and the set is
sorted so that slot 0 is the most over-confident (lowest-scoring) annotator
and slot n-1 the most under-confident.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
_CELL = 0.25

# floor() guard: recovers real-arithmetic floor(n*alpha) when binary floats
# land a hair under an integer (e.g. c=0.2, n=5 gives n*alpha=0.999...9)
_FLOOR_EPS = 1e-9


@dataclass(frozen=True)
class AnnotationConfig:
    n: int = 5
    rho: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"annotator count must be >= 1, got {self.n}")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")


@dataclass(frozen=True)
class AnnotationSet:
    labels: tuple[float, ...]  # ascending, all on GRID
    n: int
    rho: float
    seed: int

    def __post_init__(self):
        if len(self.labels) != self.n:
            raise ValueError(f"expected {self.n} labels, got {len(self.labels)}")
        if any(v not in GRID for v in self.labels):
            raise ValueError(f"labels off the grid: {self.labels}")
        if list(self.labels) != sorted(self.labels):
            raise ValueError("labels must be sorted ascending")


def _check_score(c: float) -> None:
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"complexity {c} outside [0, 1]")


def bracket(c: float) -> tuple[float, float]:
    """Grid cell [low, high] containing c; scores on the grid use the cell above,
    except c in [0.75, 1] which always maps to the top cell."""
    _check_score(c)
    low = _CELL * min(math.floor(c / _CELL), 3)
    return low, low + _CELL


def alpha(c: float, low: float, high: float) -> float:
    """Weight of the lower class in c = alpha*low + (1-alpha)*high."""
    if low >= high:
        raise ValueError(f"invalid bracket: low={low} >= high={high}")
    return (high - c) / (high - low)


def generate_annotations(c: float, cfg: AnnotationConfig) -> AnnotationSet:
    """Build the sorted dummy annotation set for score c under cfg.

    floor(n*alpha) copies of the lower class and the rest of the upper one;
    floor(rho*n) uniformly chosen slots are then redrawn uniformly over the
    grid with a generator seeded by cfg.seed, and the labels are sorted.
    """
    _check_score(c)
    low, high = bracket(c)
    a = alpha(c, low, high)
    n_low = math.floor(cfg.n * a + _FLOOR_EPS)
    labels = [low] * n_low + [high] * (cfg.n - n_low)

    n_random = math.floor(cfg.rho * cfg.n)
    if n_random > 0:
        rng = np.random.default_rng(cfg.seed)
        positions = rng.choice(cfg.n, size=n_random, replace=False)
        for pos in positions:
            labels[pos] = GRID[rng.integers(len(GRID))]

    labels.sort()
    return AnnotationSet(labels=tuple(labels), n=cfg.n, rho=cfg.rho, seed=cfg.seed)


def to_categorical(label: float) -> int:
    """Grid label -> class id: 0->1, 0.25->2, 0.5->3, 0.75->4, 1->5."""
    try:
        return GRID.index(label) + 1
    except ValueError:
        raise ValueError(f"{label} is not a grid label") from None


def from_categorical(class_id: int) -> float:
    """Inverse of to_categorical."""
    if not 1 <= class_id <= len(GRID):
        raise ValueError(f"class id must be in 1..{len(GRID)}, got {class_id}")
    return GRID[class_id - 1]


def aggregate(labels) -> float:
    """Arithmetic mean of predicted grid labels: the final complexity score."""
    labels = list(labels)
    if not labels:
        raise ValueError("cannot aggregate an empty label list")
    return float(sum(labels) / len(labels))
