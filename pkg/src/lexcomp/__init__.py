"""Lexical complexity prediction over 0..1 scores.

The package trains two pipelines on word-in-context features: a bank of
multiclass SVMs over synthetic annotator labels, and a ridge regression
baseline. Their outputs can be blended into a single ensemble score.
"""

from .align import Span, apply_weak_signal, kmp_find, locate_target, mean_pool
from .annotate import (
    GRID,
    AnnotationConfig,
    AnnotationSet,
    aggregate,
    alpha,
    bracket,
    from_categorical,
    generate_annotations,
    to_categorical,
)
from .corpus import (
    Corpus,
    Dataset,
    Instance,
    Subtask,
    format_score,
    parse_complex_tsv,
    write_tsv,
)
from .embeddings import (
    CtxEmbeddingRecord,
    CtxStore,
    WordVecStore,
    context_vector,
    load_contextual,
    load_glove,
    lookup_token,
)
from .metrics import MetricsReport, mae, mse, pearson
from .pipeline import (
    ClassifierBank,
    EnsembleConfig,
    FeatureSource,
    featurize,
    load_bank,
    predict_classification,
    predict_ensemble,
    predict_regression,
    save_bank,
    train_classification,
    train_regression,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotationConfig",
    "AnnotationSet",
    "ClassifierBank",
    "Corpus",
    "CtxEmbeddingRecord",
    "CtxStore",
    "Dataset",
    "EnsembleConfig",
    "FeatureSource",
    "GRID",
    "Instance",
    "MetricsReport",
    "Span",
    "Subtask",
    "WordVecStore",
    "aggregate",
    "alpha",
    "apply_weak_signal",
    "bracket",
    "context_vector",
    "featurize",
    "format_score",
    "from_categorical",
    "generate_annotations",
    "kmp_find",
    "load_bank",
    "load_contextual",
    "load_glove",
    "locate_target",
    "lookup_token",
    "mae",
    "mean_pool",
    "mse",
    "parse_complex_tsv",
    "pearson",
    "predict_classification",
    "predict_ensemble",
    "predict_regression",
    "save_bank",
    "to_categorical",
    "train_classification",
    "train_regression",
    "write_tsv",
]
