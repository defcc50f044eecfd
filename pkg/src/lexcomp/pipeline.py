"""Trainable complexity estimators: the annotator-slot classifier bank, the
embedding regression, and their weighted ensemble.

Training the bank mirrors how the gold scores were produced: each labeled
instance is expanded into a sorted dummy annotation set, and slot i's
multiclass SVM learns to vote like annotator i across instances. Prediction
runs every slot and averages the grid labels back into a score.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from . import linreg, svm
from .annotate import (
    AnnotationConfig,
    aggregate,
    from_categorical,
    generate_annotations,
    to_categorical,
)
from .corpus import Dataset, Instance
from .embeddings import CtxStore, WordVecStore, context_vector, lookup_token


class FeatureSource(str, Enum):
    GLOVE = "glove"
    CONTEXTUAL = "contextual"
    CONCAT = "concat"


def _ctx_needle(instance: Instance, ctx: CtxStore) -> list[str]:
    record = ctx.records.get(instance.id)
    if record is None:
        raise KeyError(f"no contextual record for instance {instance.id!r}")
    if record.target_tokens is not None:
        return list(record.target_tokens)
    return instance.target.split()


def featurize(
    instance: Instance,
    source: FeatureSource,
    glove: WordVecStore | None,
    ctx: CtxStore | None = None,
) -> np.ndarray:
    """Feature vector for one instance under the chosen source."""
    if source is FeatureSource.GLOVE:
        if glove is None:
            raise ValueError("glove feature source requires a word vector store")
        return lookup_token(glove, instance.target)
    if source is FeatureSource.CONTEXTUAL:
        if ctx is None:
            raise ValueError("contextual feature source requires a contextual store")
        return context_vector(ctx, instance.id, _ctx_needle(instance, ctx))
    if source is FeatureSource.CONCAT:
        return np.concatenate(
            [
                featurize(instance, FeatureSource.GLOVE, glove, ctx),
                featurize(instance, FeatureSource.CONTEXTUAL, glove, ctx),
            ]
        )
    raise ValueError(f"unknown feature source {source!r}")


def _feature_matrix(
    data: Dataset,
    source: FeatureSource,
    glove: WordVecStore | None,
    ctx: CtxStore | None,
) -> np.ndarray:
    return np.array([featurize(inst, source, glove, ctx) for inst in data])


def instance_annotation_seed(base_seed: int, index: int) -> int:
    """Seed for instance `index`'s annotation draw; each instance gets its own."""
    return base_seed + index


@dataclass(frozen=True)
class ClassifierBank:
    slots: tuple[svm.MulticlassSvm, ...]  # ascending annotation index
    annotation_cfg: AnnotationConfig
    feature: FeatureSource
    dim: int

    def __post_init__(self):
        if len(self.slots) != self.annotation_cfg.n:
            raise ValueError(
                f"{len(self.slots)} slots for n={self.annotation_cfg.n} annotators"
            )


def train_classification(
    data: Dataset,
    glove: WordVecStore | None,
    cfg: AnnotationConfig,
    svm_params: svm.SvmParams,
    feature: FeatureSource = FeatureSource.GLOVE,
    ctx: CtxStore | None = None,
    parallel: bool = False,
) -> ClassifierBank:
    """Train the n annotator-slot classifiers on dummy annotation labels.

    Slot i trains on class labels taken from position i of each instance's
    sorted annotation set, with SVM seed cfg.seed + i; slots are independent,
    so parallel and serial training produce identical banks.
    """
    if len(data) == 0:
        raise ValueError("empty dataset")
    gold = data.gold_array()
    features = _feature_matrix(data, feature, glove, ctx)

    slot_labels = np.empty((cfg.n, len(data)), dtype=int)
    for j, c in enumerate(gold):
        inst_cfg = replace(cfg, seed=instance_annotation_seed(cfg.seed, j))
        ann = generate_annotations(float(c), inst_cfg)
        for i, label in enumerate(ann.labels):
            slot_labels[i, j] = to_categorical(label)

    def train_slot(i: int) -> svm.MulticlassSvm:
        return svm.train_multiclass(
            features, slot_labels[i], svm_params, seed=cfg.seed + i
        )

    if parallel:
        with ThreadPoolExecutor() as pool:
            slots = tuple(pool.map(train_slot, range(cfg.n)))
    else:
        slots = tuple(train_slot(i) for i in range(cfg.n))

    return ClassifierBank(
        slots=slots, annotation_cfg=cfg, feature=feature, dim=features.shape[1]
    )


def predict_classification(
    bank: ClassifierBank,
    instance: Instance,
    glove: WordVecStore | None,
    ctx: CtxStore | None = None,
) -> float:
    """Average of the slot classifiers' grid labels for one instance."""
    x = featurize(instance, bank.feature, glove, ctx)
    return aggregate(
        from_categorical(svm.predict_class(slot, x)) for slot in bank.slots
    )


def train_regression(
    data: Dataset,
    source: FeatureSource,
    glove: WordVecStore | None,
    ctx: CtxStore | None = None,
    lambda_: float = 1e-6,
) -> linreg.LinModel:
    """Fit the ridge regression on (features, gold complexity)."""
    if len(data) == 0:
        raise ValueError("empty dataset")
    return linreg.fit(_feature_matrix(data, source, glove, ctx), data.gold_array(), lambda_)


def predict_regression(
    model: linreg.LinModel,
    instance: Instance,
    source: FeatureSource,
    glove: WordVecStore | None,
    ctx: CtxStore | None = None,
) -> float:
    return linreg.predict(model, featurize(instance, source, glove, ctx))


@dataclass(frozen=True)
class EnsembleConfig:
    w_reg: float = 0.5
    w_cls: float = 0.5

    def __post_init__(self):
        if self.w_reg < 0 or self.w_cls < 0:
            raise ValueError("ensemble weights must be non-negative")
        if self.w_reg + self.w_cls == 0:
            raise ValueError("at least one ensemble weight must be positive")


def predict_ensemble(p_reg: float, p_cls: float, cfg: EnsembleConfig) -> float:
    """Weighted mean of the two pipeline predictions."""
    return (cfg.w_reg * p_reg + cfg.w_cls * p_cls) / (cfg.w_reg + cfg.w_cls)


BANK_MANIFEST = "bank.json"


def save_bank(bank: ClassifierBank, directory: str | Path) -> None:
    """Persist the bank as a manifest plus one model document per slot."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    slot_files = []
    for i, slot in enumerate(bank.slots):
        name = f"slot_{i}.json"
        with open(directory / name, "w", encoding="utf-8") as fh:
            svm.save_multiclass(slot, fh)
        slot_files.append(name)
    manifest = {
        "n": bank.annotation_cfg.n,
        "rho": bank.annotation_cfg.rho,
        "seed": bank.annotation_cfg.seed,
        "feature": bank.feature.value,
        "dim": bank.dim,
        "slots": slot_files,
    }
    with open(directory / BANK_MANIFEST, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)


def load_bank(directory: str | Path) -> ClassifierBank:
    directory = Path(directory)
    with open(directory / BANK_MANIFEST, encoding="utf-8") as fh:
        manifest = json.load(fh)
    slots = []
    for name in manifest["slots"]:
        with open(directory / name, encoding="utf-8") as fh:
            slots.append(svm.load_multiclass(fh))
    return ClassifierBank(
        slots=tuple(slots),
        annotation_cfg=AnnotationConfig(
            n=int(manifest["n"]), rho=float(manifest["rho"]), seed=int(manifest["seed"])
        ),
        feature=FeatureSource(manifest["feature"]),
        dim=int(manifest["dim"]),
    )
