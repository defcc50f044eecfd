"""Command-line front-end: preprocess, train, predict, evaluate,
gen-annotations, export-manifest.

Settings are resolved in layers: built-in defaults, then the flat key=value
config file (--config), then the LEXCOMP_SEED environment variable for the
seed, then explicit command-line flags. Flags always win. Every command is
deterministic given its resolved settings; reruns produce byte-identical
output files.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from dataclasses import replace
from pathlib import Path

from . import linreg, svm
from .align import locate_target
from .annotate import AnnotationConfig, generate_annotations, to_categorical
from .corpus import Dataset, Instance, format_score, parse_complex_tsv, write_tsv
from .embeddings import CtxStore, WordVecStore, load_contextual, load_glove
from .metrics import mae as mae_fn, mse as mse_fn, pearson as pearson_fn, MetricsReport
from .pipeline import (
    ClassifierBank,
    EnsembleConfig,
    FeatureSource,
    instance_annotation_seed,
    load_bank,
    predict_classification,
    predict_ensemble,
    predict_regression,
    save_bank,
    train_classification,
    train_regression,
)

logger = logging.getLogger(__name__)

RUN_CONFIG_NAME = "run_config.txt"
REGRESSION_NAME = "regression.json"

_GRID_TEXT = {0.0: "0", 0.25: "0.25", 0.5: "0.5", 0.75: "0.75", 1.0: "1"}


def _parse_gamma(text: str):
    return None if text.strip().lower() == "auto" else float(text)


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# key -> (parser, built-in default); None defaults resolve contextually
_SETTINGS = {
    "train": (str, None),
    "glove": (str, None),
    "glove_dim": (int, 200),
    "contextual": (str, None),
    "model_dir": (str, None),
    "n": (int, 5),
    "rho": (float, 0.05),
    "seed": (int, 0),
    "c_slack": (float, 1.0),
    "gamma": (_parse_gamma, None),
    "tol": (float, 1e-3),
    "max_passes": (int, 100),
    "lambda": (float, 1e-6),
    "w_reg": (float, 0.5),
    "w_cls": (float, 0.5),
    "cls_feature": (str, "glove"),
    "reg_feature": (str, None),
    "pipelines": (str, "both"),
    "parallel": (_parse_bool, False),
}


def _read_kv_file(path: str | Path) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


def _resolve_settings(args: argparse.Namespace) -> dict:
    """Layer defaults < config file < LEXCOMP_SEED < flags."""
    resolved = {key: default for key, (_, default) in _SETTINGS.items()}

    config_path = getattr(args, "config", None)
    layers: list[dict[str, str]] = []
    if config_path:
        layers.append(_read_kv_file(config_path))
    for layer in layers:
        for key, text in layer.items():
            if key not in _SETTINGS:
                raise ValueError(f"unknown config key {key!r}")
            parse, _ = _SETTINGS[key]
            resolved[key] = parse(text)

    env_seed = os.environ.get("LEXCOMP_SEED")
    if env_seed is not None:
        resolved["seed"] = int(env_seed)

    for key in _SETTINGS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    return resolved


def _settings_text(settings: dict) -> str:
    lines = []
    for key in sorted(settings):
        value = settings[key]
        if value is None:
            value = "auto" if key == "gamma" else ""
        elif isinstance(value, bool):
            value = "true" if value else "false"
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def _load_stores(settings: dict) -> tuple[WordVecStore | None, CtxStore | None]:
    glove = None
    if settings.get("glove"):
        with open(settings["glove"], encoding="utf-8") as fh:
            glove = load_glove(fh, dim=settings["glove_dim"])
    ctx = None
    if settings.get("contextual"):
        with open(settings["contextual"], encoding="utf-8") as fh:
            ctx = load_contextual(fh)
    return glove, ctx


def _annotation_cfg(settings: dict) -> AnnotationConfig:
    return AnnotationConfig(n=settings["n"], rho=settings["rho"], seed=settings["seed"])


def _svm_params(settings: dict) -> svm.SvmParams:
    return svm.SvmParams(
        c_slack=settings["c_slack"],
        gamma=settings["gamma"],
        tol=settings["tol"],
        max_passes=settings["max_passes"],
    )


def cmd_preprocess(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as fh:
        data = parse_complex_tsv(fh, has_labels=not args.no_labels)

    rewritten = []
    fallbacks = []
    failures = []
    for inst in data:
        try:
            start, end, whole = locate_target(inst.sentence, inst.target)
        except ValueError:
            failures.append(inst.id)
            continue
        if not whole:
            fallbacks.append(inst.id)
        sentence = (
            inst.sentence[:start] + "'" + inst.sentence[start:end] + "'"
            + inst.sentence[end:]
        )
        rewritten.append(replace(inst, sentence=sentence))

    for ident in fallbacks:
        print(f"note: row {ident}: target matched only as a substring", file=sys.stderr)
    if failures:
        for ident in failures:
            print(f"error: row {ident}: target not found in sentence", file=sys.stderr)
        return 1

    out = Dataset(instances=tuple(rewritten), subtask=data.subtask)
    with open(args.output, "w", encoding="utf-8") as fh:
        write_tsv(out, fh, include_labels=not args.no_labels)
    return 0


def _slot_histograms(data: Dataset, cfg: AnnotationConfig) -> list[Counter]:
    counts = [Counter() for _ in range(cfg.n)]
    for j, inst in enumerate(data):
        inst_cfg = replace(cfg, seed=instance_annotation_seed(cfg.seed, j))
        ann = generate_annotations(inst.gold, inst_cfg)
        for i, label in enumerate(ann.labels):
            counts[i][to_categorical(label)] += 1
    return counts


def cmd_train(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    train_path = settings.get("train")
    if not train_path:
        raise ValueError("no training file: set --train or the `train` config key")
    model_dir = settings.get("model_dir")
    if not model_dir:
        raise ValueError("no model directory: set --model-dir or `model_dir`")
    pipelines = settings["pipelines"]
    if pipelines not in ("both", "classification", "regression"):
        raise ValueError(f"pipelines must be both/classification/regression, got {pipelines!r}")

    with open(train_path, encoding="utf-8") as fh:
        data = parse_complex_tsv(fh, has_labels=True)
    if len(data) == 0:
        raise ValueError(f"{train_path}: no training rows")

    glove, ctx = _load_stores(settings)
    cls_feature = FeatureSource(settings["cls_feature"])
    reg_feature = settings.get("reg_feature")
    if reg_feature is None:
        reg_feature = FeatureSource.CONTEXTUAL if ctx is not None else FeatureSource.GLOVE
    else:
        reg_feature = FeatureSource(reg_feature)
    settings["reg_feature"] = reg_feature.value

    if cls_feature is not FeatureSource.CONTEXTUAL and glove is None and pipelines != "regression":
        raise ValueError("classification needs a GloVe file: set --glove")

    model_path = Path(model_dir)
    model_path.mkdir(parents=True, exist_ok=True)

    if pipelines in ("both", "classification"):
        cfg = _annotation_cfg(settings)
        bank = train_classification(
            data,
            glove,
            cfg,
            _svm_params(settings),
            feature=cls_feature,
            ctx=ctx,
            parallel=settings["parallel"],
        )
        save_bank(bank, model_path)
        for i, hist in enumerate(_slot_histograms(data, cfg)):
            body = " ".join(f"{cls}={hist[cls]}" for cls in sorted(hist))
            print(f"slot {i}: {body}")

    if pipelines in ("both", "regression"):
        model = train_regression(
            data, reg_feature, glove, ctx, lambda_=settings["lambda"]
        )
        with open(model_path / REGRESSION_NAME, "w", encoding="utf-8") as fh:
            linreg.save_model(model, fh)

    with open(model_path / RUN_CONFIG_NAME, "w", encoding="utf-8") as fh:
        fh.write(_settings_text(settings))
    print(f"models written to {model_path}")
    return 0


def _resolve_predict_settings(args: argparse.Namespace) -> dict:
    """Predict also layers the manifest saved at training time, below everything."""
    settings = _resolve_settings(args)
    manifest_path = Path(args.model_dir) / RUN_CONFIG_NAME
    if manifest_path.exists():
        manifest = _read_kv_file(manifest_path)
        base = dict(settings)
        for key, text in manifest.items():
            if key in _SETTINGS and text != "":
                parse, _ = _SETTINGS[key]
                base[key] = parse(text)
        # config file, env, and flags still win over the training manifest
        config_path = getattr(args, "config", None)
        if config_path:
            for key, text in _read_kv_file(config_path).items():
                parse, _ = _SETTINGS[key]
                base[key] = parse(text)
        env_seed = os.environ.get("LEXCOMP_SEED")
        if env_seed is not None:
            base["seed"] = int(env_seed)
        for key in _SETTINGS:
            flag_value = getattr(args, key, None)
            if flag_value is not None:
                base[key] = flag_value
        settings = base
    return settings


def cmd_predict(args: argparse.Namespace) -> int:
    settings = _resolve_predict_settings(args)
    model_dir = Path(args.model_dir)

    bank = None
    if (model_dir / "bank.json").exists():
        bank = load_bank(model_dir)
    reg_model = None
    if (model_dir / REGRESSION_NAME).exists():
        with open(model_dir / REGRESSION_NAME, encoding="utf-8") as fh:
            reg_model = linreg.load_model(fh)

    which = args.pipeline
    if which == "auto":
        which = "ensemble" if bank and reg_model else (
            "classification" if bank else "regression"
        )
    if which in ("classification", "ensemble") and bank is None:
        raise ValueError(f"{model_dir}: no classifier bank found")
    if which in ("regression", "ensemble") and reg_model is None:
        raise ValueError(f"{model_dir}: no regression model found")

    with open(args.input, encoding="utf-8") as fh:
        data = parse_complex_tsv(fh, has_labels=not args.no_labels)

    glove, ctx = _load_stores(settings)
    reg_feature = FeatureSource(settings["reg_feature"] or "glove")
    ens = EnsembleConfig(w_reg=settings["w_reg"], w_cls=settings["w_cls"])

    rows = []
    for inst in data:
        if which == "classification":
            score = predict_classification(bank, inst, glove, ctx)
        elif which == "regression":
            score = predict_regression(reg_model, inst, reg_feature, glove, ctx)
        else:
            p_cls = predict_classification(bank, inst, glove, ctx)
            p_reg = predict_regression(reg_model, inst, reg_feature, glove, ctx)
            score = predict_ensemble(p_reg, p_cls, ens)
        rows.append(f"{inst.id}\t{format_score(score)}\n")

    with open(args.output, "w", encoding="utf-8") as fh:
        fh.writelines(rows)
    print(f"{len(rows)} predictions written to {args.output}")
    return 0


def _read_predictions(path: str | Path) -> dict[str, float]:
    preds: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ValueError(f"{path}: row {lineno}: expected `id<TAB>prediction`")
            ident, text = fields
            if lineno == 1 and text.lower() == "prediction":
                continue
            if ident in preds:
                raise ValueError(f"{path}: row {lineno}: duplicate id {ident!r}")
            preds[ident] = float(text)
    return preds


def cmd_evaluate(args: argparse.Namespace) -> int:
    preds = _read_predictions(args.predictions)
    with open(args.gold, encoding="utf-8") as fh:
        gold_data = parse_complex_tsv(fh, has_labels=True)
    gold_by_id = {inst.id: inst.gold for inst in gold_data}

    missing = [ident for ident in preds if ident not in gold_by_id]
    if missing:
        raise ValueError(
            f"ids missing from gold file: {', '.join(sorted(missing)[:10])}"
        )
    if not preds:
        raise ValueError("prediction file is empty")
    unevaluated = sum(1 for ident in gold_by_id if ident not in preds)
    if unevaluated:
        logger.warning("%d gold rows have no prediction", unevaluated)

    ids = [inst.id for inst in gold_data if inst.id in preds]
    p = [preds[i] for i in ids]
    g = [gold_by_id[i] for i in ids]

    mae_v = mae_fn(p, g)
    mse_v = mse_fn(p, g)
    try:
        pearson_v = pearson_fn(p, g)
    except ValueError as exc:
        print(f"mae\t{format_score(mae_v)}")
        print(f"mse\t{format_score(mse_v)}")
        print(f"error: pearson: {exc}", file=sys.stderr)
        return 1

    report = MetricsReport(mae=mae_v, mse=mse_v, pearson=pearson_v, n=len(ids))
    if args.json:
        print(report.as_json())
    else:
        print(report.as_tsv(), end="")
    return 0


def cmd_gen_annotations(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    cfg = _annotation_cfg(settings)
    with open(args.input, encoding="utf-8") as fh:
        data = parse_complex_tsv(fh, has_labels=True)

    with open(args.output, "w", encoding="utf-8") as fh:
        for j, inst in enumerate(data):
            inst_cfg = replace(cfg, seed=instance_annotation_seed(cfg.seed, j))
            ann = generate_annotations(inst.gold, inst_cfg)
            labels = ",".join(_GRID_TEXT[v] for v in ann.labels)
            fh.write(f"{inst.id}\t{format_score(inst.gold)}\t{labels}\n")
    return 0


def cmd_export_manifest(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    text = _settings_text(settings)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return 0


def _add_setting_flags(parser: argparse.ArgumentParser, keys: list[str]) -> None:
    for key in keys:
        parse, _ = _SETTINGS[key]
        flag = "--" + key.replace("_", "-")
        if key == "parallel":
            parser.add_argument(flag, action="store_const", const=True, default=None,
                                help="train annotator slots in worker threads")
        elif key == "pipelines":
            parser.add_argument(flag, choices=["both", "classification", "regression"],
                                default=None)
        elif key in ("cls_feature", "reg_feature"):
            parser.add_argument(flag, choices=[f.value for f in FeatureSource],
                                default=None)
        else:
            parser.add_argument(flag, type=parse, default=None, dest=key)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexcomp",
        description="Lexical complexity prediction: training, prediction, evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="wrap each row's target in quote signals")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--no-labels", action="store_true")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="train classification and/or regression models")
    p.add_argument("--config")
    _add_setting_flags(p, ["train", "glove", "glove_dim", "contextual", "model_dir",
                           "n", "rho", "seed", "c_slack", "gamma", "tol", "max_passes",
                           "lambda", "cls_feature", "reg_feature", "pipelines",
                           "parallel"])
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write id<TAB>prediction rows for an input file")
    p.add_argument("--config")
    p.add_argument("--model-dir", required=True, dest="model_dir")
    p.add_argument("--in", required=True, dest="input")
    p.add_argument("--out", required=True, dest="output")
    p.add_argument("--pipeline", choices=["auto", "classification", "regression", "ensemble"],
                   default="auto")
    p.add_argument("--no-labels", action="store_true")
    _add_setting_flags(p, ["glove", "glove_dim", "contextual", "w_reg", "w_cls"])
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="join predictions with gold rows by id and score")
    p.add_argument("predictions")
    p.add_argument("gold")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("gen-annotations", help="dump dummy annotation sets as TSV")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--config")
    _add_setting_flags(p, ["n", "rho", "seed"])
    p.set_defaults(func=cmd_gen_annotations)

    p = sub.add_parser("export-manifest", help="print the fully resolved settings")
    p.add_argument("--config")
    p.add_argument("--out", dest="output")
    _add_setting_flags(p, list(_SETTINGS))
    p.set_defaults(func=cmd_export_manifest)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
