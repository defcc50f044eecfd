import json

import numpy as np
import pytest

from lexcomp.cli import main


def run(argv, capsys=None):
    if capsys is not None:
        capsys.readouterr()  # drop output buffered by setup commands
    code = main(argv)
    if capsys is None:
        return code, "", ""
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_glove(path, words, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    vectors = {}
    with open(path, "w") as fh:
        for w in words:
            v = rng.standard_normal(dim)
            vectors[w] = v
            fh.write(w + " " + " ".join(f"{x:.5f}" for x in v) + "\n")
    return vectors


def write_rows(path, rows, header=False):
    with open(path, "w") as fh:
        if header:
            fh.write("id\tcorpus\tsentence\ttoken\tcomplexity\n")
        for r in rows:
            fh.write("\t".join(map(str, r)) + "\n")


def synthetic_rows(n, words, vectors, seed=0):
    rng = np.random.default_rng(seed)
    w_true = rng.standard_normal(len(next(iter(vectors.values()))))
    rows = []
    for j in range(n):
        target = words[int(rng.integers(len(words)))]
        filler = [words[int(rng.integers(len(words)))] for _ in range(4)]
        sentence = " ".join(filler[:2] + [target] + filler[2:])
        c = round(float(1 / (1 + np.exp(-1.5 * w_true @ vectors[target]))), 3)
        rows.append((f"id{j:03d}", "bible", sentence, target, c))
    return rows


@pytest.fixture()
def workspace(tmp_path):
    words = [f"w{i:02d}" for i in range(20)]
    glove = tmp_path / "vectors.txt"
    vectors = write_glove(glove, words, dim=4)
    rows = synthetic_rows(28, words, vectors, seed=1)
    train = tmp_path / "train.tsv"
    test = tmp_path / "test.tsv"
    write_rows(train, rows[:20], header=True)
    write_rows(test, rows[20:])
    return tmp_path, train, test, glove


def train_args(ws, model="model", extra=()):
    tmp_path, train, _, glove = ws
    return [
        "train",
        "--train", str(train),
        "--glove", str(glove),
        "--glove-dim", "4",
        "--model-dir", str(tmp_path / model),
        "--max-passes", "10",
        *extra,
    ]


def test_preprocess_wraps_targets(tmp_path, capsys):
    src = tmp_path / "in.tsv"
    dst = tmp_path / "out.tsv"
    write_rows(src, [("a1", "bible", "The cat sat", "cat", 0.25)])
    code, out, err = run(["preprocess", str(src), str(dst)], capsys)
    assert code == 0
    body = dst.read_text()
    assert "The 'cat' sat" in body
    assert len(body.strip().splitlines()) == 2  # header + row


def test_preprocess_empty_file(tmp_path):
    src = tmp_path / "in.tsv"
    dst = tmp_path / "out.tsv"
    src.write_text("")
    assert main(["preprocess", str(src), str(dst)]) == 0
    # header only, no data rows
    assert dst.read_text().strip().splitlines() == ["id\tcorpus\tsentence\ttoken\tcomplexity"]


def test_preprocess_missing_target_lists_row(tmp_path, capsys):
    src = tmp_path / "in.tsv"
    write_rows(src, [
        ("a1", "bible", "The cat sat", "cat", 0.25),
        ("a2", "bible", "No match here", "absent", 0.5),
    ])
    code, out, err = run(["preprocess", str(src), str(tmp_path / "out.tsv")], capsys)
    assert code == 1
    assert "a2" in err


def test_preprocess_notes_substring_fallback(tmp_path, capsys):
    src = tmp_path / "in.tsv"
    write_rows(src, [("a1", "bible", "recategorize all", "cat", 0.25)])
    code, out, err = run(["preprocess", str(src), str(tmp_path / "out.tsv")], capsys)
    assert code == 0
    assert "a1" in err and "substring" in err


def test_train_writes_models_and_histograms(workspace, capsys):
    tmp_path = workspace[0]
    code, out, err = run(train_args(workspace), capsys)
    assert code == 0
    model = tmp_path / "model"
    assert (model / "bank.json").exists()
    assert (model / "regression.json").exists()
    assert (model / "run_config.txt").exists()
    for i in range(5):
        assert (model / f"slot_{i}.json").exists()
        assert f"slot {i}:" in out


def test_train_n1_single_slot(workspace):
    tmp_path = workspace[0]
    assert main(train_args(workspace, model="m1", extra=["--n", "1"])) == 0
    assert (tmp_path / "m1" / "slot_0.json").exists()
    assert not (tmp_path / "m1" / "slot_1.json").exists()


def test_train_missing_glove_is_config_error(workspace, capsys):
    tmp_path, train, _, _ = workspace
    code, out, err = run(
        ["train", "--train", str(train), "--model-dir", str(tmp_path / "m2")], capsys
    )
    assert code == 1
    assert "glove" in err.lower()


def test_train_empty_file_errors(tmp_path, capsys):
    train = tmp_path / "empty.tsv"
    train.write_text("id\tcorpus\tsentence\ttoken\tcomplexity\n")
    glove = tmp_path / "v.txt"
    write_glove(glove, ["w"], dim=2)
    code, out, err = run(
        ["train", "--train", str(train), "--glove", str(glove), "--glove-dim", "2",
         "--model-dir", str(tmp_path / "m")],
        capsys,
    )
    assert code == 1
    assert "no training rows" in err


def test_predict_row_count_and_range(workspace, capsys):
    tmp_path, _, test, _ = workspace
    assert main(train_args(workspace)) == 0
    preds = tmp_path / "preds.tsv"
    code, out, err = run(
        ["predict", "--model-dir", str(tmp_path / "model"),
         "--in", str(test), "--out", str(preds)],
        capsys,
    )
    assert code == 0
    lines = preds.read_text().strip().splitlines()
    assert len(lines) == 8
    for line in lines:
        ident, value = line.split("\t")
        assert 0.0 <= float(value) <= 1.0


def test_predict_single_pipelines_and_ensemble_mean(workspace):
    tmp_path, _, test, _ = workspace
    assert main(train_args(workspace)) == 0
    outs = {}
    for which in ("classification", "regression", "ensemble"):
        out = tmp_path / f"{which}.tsv"
        assert main(
            ["predict", "--model-dir", str(tmp_path / "model"), "--in", str(test),
             "--out", str(out), "--pipeline", which]
        ) == 0
        outs[which] = {
            line.split("\t")[0]: float(line.split("\t")[1])
            for line in out.read_text().strip().splitlines()
        }
    for ident in outs["ensemble"]:
        blended = 0.5 * (outs["classification"][ident] + outs["regression"][ident])
        assert abs(outs["ensemble"][ident] - blended) < 1e-12


def test_predict_requires_matching_models(workspace, capsys):
    tmp_path, _, test, _ = workspace
    assert main(train_args(workspace, model="regonly", extra=["--pipelines", "regression"])) == 0
    code, out, err = run(
        ["predict", "--model-dir", str(tmp_path / "regonly"), "--in", str(test),
         "--out", str(tmp_path / "x.tsv"), "--pipeline", "ensemble"],
        capsys,
    )
    assert code == 1
    assert "no classifier bank" in err


def test_predict_auto_uses_available_model(workspace):
    tmp_path, _, test, _ = workspace
    assert main(train_args(workspace, model="regonly2", extra=["--pipelines", "regression"])) == 0
    out = tmp_path / "auto.tsv"
    assert main(
        ["predict", "--model-dir", str(tmp_path / "regonly2"), "--in", str(test),
         "--out", str(out)]
    ) == 0
    assert len(out.read_text().strip().splitlines()) == 8


def test_evaluate_against_gold(workspace, capsys):
    tmp_path, _, test, _ = workspace
    assert main(train_args(workspace)) == 0
    preds = tmp_path / "preds.tsv"
    assert main(["predict", "--model-dir", str(tmp_path / "model"),
                 "--in", str(test), "--out", str(preds)]) == 0
    code, out, err = run(["evaluate", str(preds), str(test)], capsys)
    assert code == 0
    header, values = out.strip().splitlines()[:2]
    assert header.split("\t") == ["mae", "mse", "pearson", "n"]
    assert values.split("\t")[3] == "8"

    code, out, err = run(["evaluate", str(preds), str(test), "--json"], capsys)
    assert code == 0
    doc = json.loads(out.strip().splitlines()[-1])
    assert doc["n"] == 8


def test_evaluate_pred_equals_gold(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    write_rows(gold, [
        ("a1", "bible", "aa bb cc", "aa", 0.1),
        ("a2", "bible", "dd ee ff", "dd", 0.3),
        ("a3", "bible", "gg hh ii", "gg", 0.7),
    ])
    preds = tmp_path / "p.tsv"
    preds.write_text("a1\t0.1\na2\t0.3\na3\t0.7\n")
    code, out, err = run(["evaluate", str(preds), str(gold)], capsys)
    assert code == 0
    values = out.strip().splitlines()[1].split("\t")
    assert float(values[0]) == 0.0  # mae
    assert float(values[2]) == 1.0  # pearson


def test_evaluate_constant_gold_reports_pearson_error(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    write_rows(gold, [
        ("a1", "bible", "aa bb cc", "aa", 0.5),
        ("a2", "bible", "dd ee ff", "dd", 0.5),
    ])
    preds = tmp_path / "p.tsv"
    preds.write_text("a1\t0.5\na2\t0.5\n")
    code, out, err = run(["evaluate", str(preds), str(gold)], capsys)
    assert code == 1
    assert "mae\t0.000000" in out
    assert "pearson" in err


def test_evaluate_disjoint_ids_error(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    write_rows(gold, [("a1", "bible", "aa bb", "aa", 0.5)])
    preds = tmp_path / "p.tsv"
    preds.write_text("zz\t0.5\n")
    code, out, err = run(["evaluate", str(preds), str(gold)], capsys)
    assert code == 1
    assert "zz" in err


def test_evaluate_joins_on_id_not_order(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    write_rows(gold, [
        ("a1", "bible", "aa bb cc", "aa", 0.0),
        ("a2", "bible", "dd ee ff", "dd", 0.5),
        ("a3", "bible", "gg hh ii", "gg", 1.0),
    ])
    preds = tmp_path / "p.tsv"
    preds.write_text("a3\t1.0\na1\t0.0\na2\t0.5\n")  # re-sorted
    code, out, err = run(["evaluate", str(preds), str(gold)], capsys)
    assert code == 0
    assert float(out.strip().splitlines()[1].split("\t")[0]) == 0.0


def test_gen_annotations_format_and_determinism(tmp_path):
    src = tmp_path / "in.tsv"
    write_rows(src, [
        ("a1", "bible", "aa bb cc", "aa", 0.2),
        ("a2", "bible", "dd ee ff", "dd", 1.0),
    ])
    out1 = tmp_path / "ann1.tsv"
    out2 = tmp_path / "ann2.tsv"
    assert main(["gen-annotations", str(src), str(out1), "--rho", "0", "--seed", "0"]) == 0
    assert main(["gen-annotations", str(src), str(out2), "--rho", "0", "--seed", "0"]) == 0
    assert out1.read_bytes() == out2.read_bytes()

    lines = out1.read_text().strip().splitlines()
    first = lines[0].split("\t")
    assert first[0] == "a1"
    assert first[2] == "0,0.25,0.25,0.25,0.25"
    assert lines[1].split("\t")[2] == "1,1,1,1,1"


def test_seed_env_override_and_flag_priority(tmp_path, monkeypatch):
    src = tmp_path / "in.tsv"
    write_rows(src, [("a1", "bible", "aa bb cc", "aa", 0.37)])

    def annotate(args, env=None):
        out = tmp_path / f"out{annotate.counter}.tsv"
        annotate.counter += 1
        if env is None:
            monkeypatch.delenv("LEXCOMP_SEED", raising=False)
        else:
            monkeypatch.setenv("LEXCOMP_SEED", env)
        assert main(["gen-annotations", str(src), str(out), "--rho", "0.5", *args]) == 0
        return out.read_text()

    annotate.counter = 0
    base = annotate([])
    env9 = annotate([], env="9")
    flag9 = annotate(["--seed", "9"])
    flag3_env9 = annotate(["--seed", "3"], env="9")
    flag3 = annotate(["--seed", "3"])

    assert env9 == flag9  # env override behaves like the flag
    assert flag3_env9 == flag3  # explicit flag beats the env var
    assert base != env9  # and the seed actually matters here


def test_export_manifest_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment line\nseed=11\nrho=0.2\n")
    code, out, err = run(
        ["export-manifest", "--config", str(cfg), "--seed", "99"], capsys
    )
    assert code == 0
    lines = dict(line.split("=", 1) for line in out.strip().splitlines())
    assert lines["seed"] == "99"   # flag wins
    assert lines["rho"] == "0.2"   # config survives
    assert lines["n"] == "5"       # default fills the rest


def test_export_manifest_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("mystery=1\n")
    code, out, err = run(["export-manifest", "--config", str(cfg)], capsys)
    assert code == 1
    assert "mystery" in err


def test_train_predict_rerun_byte_identical(workspace):
    tmp_path, _, test, _ = workspace
    preds = []
    for attempt in ("one", "two"):
        model = f"model_{attempt}"
        assert main(train_args(workspace, model=model)) == 0
        out = tmp_path / f"preds_{attempt}.tsv"
        assert main(["predict", "--model-dir", str(tmp_path / model),
                     "--in", str(test), "--out", str(out)]) == 0
        preds.append(out.read_bytes())
    assert preds[0] == preds[1]


def test_config_file_drives_training(workspace):
    tmp_path, train, test, glove = workspace
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        f"train={train}\nglove={glove}\nglove_dim=4\n"
        f"model_dir={tmp_path / 'cfg_model'}\nmax_passes=10\nn=3\n"
    )
    assert main(["train", "--config", str(cfg)]) == 0
    assert (tmp_path / "cfg_model" / "slot_2.json").exists()
    assert not (tmp_path / "cfg_model" / "slot_3.json").exists()
