import json
import math

import numpy as np
import pytest

from lexcomp.metrics import MetricsReport, mae, mse, pearson


def test_mae_hand_case():
    assert math.isclose(mae([0.1, 0.5, 0.9], [0.2, 0.4, 1.0]), 0.1)


def test_mse_hand_case():
    assert math.isclose(mse([0.1, 0.5, 0.9], [0.2, 0.4, 1.0]), 0.01)


def test_pearson_hand_case():
    assert abs(pearson([1, 2, 3, 4], [1, 3, 2, 4]) - 0.8) < 1e-12


def test_identities_on_equal_series():
    x = [0.1, 0.4, 0.9, 0.3]
    assert mae(x, x) == 0.0
    assert mse(x, x) == 0.0
    assert math.isclose(pearson(x, x), 1.0)


def test_pearson_matches_numpy():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.random(20)
        b = rng.random(20)
        assert math.isclose(pearson(a, b), float(np.corrcoef(a, b)[0, 1]), abs_tol=1e-12)


def test_pearson_affine_invariance():
    rng = np.random.default_rng(4)
    a = rng.random(30)
    b = rng.random(30)
    r = pearson(a, b)
    assert abs(pearson(2.5 * a + 7.0, b) - r) < 1e-9
    assert abs(pearson(a, 0.1 * b - 3.0) - r) < 1e-9
    assert abs(pearson(-1.0 * a, b) + r) < 1e-9


def test_pearson_zero_variance_errors():
    with pytest.raises(ValueError, match="zero-variance"):
        pearson([0.5, 0.5, 0.5], [0.1, 0.2, 0.3])
    with pytest.raises(ValueError, match="zero-variance"):
        pearson([0.1, 0.2, 0.3], [1.0, 1.0, 1.0])


def test_pearson_needs_two_samples():
    with pytest.raises(ValueError):
        pearson([0.5], [0.5])


def test_shape_validation():
    with pytest.raises(ValueError):
        mae([0.1, 0.2], [0.1])
    with pytest.raises(ValueError):
        mse([], [])


def test_perfect_anticorrelation():
    assert math.isclose(pearson([1, 2, 3], [3, 2, 1]), -1.0)


def test_report_from_series():
    report = MetricsReport.from_series([0.1, 0.5, 0.9], [0.2, 0.4, 1.0])
    assert math.isclose(report.mae, 0.1)
    assert math.isclose(report.mse, 0.01)
    assert report.n == 3


def test_report_tsv_and_json():
    report = MetricsReport.from_series([1.0, 2.0, 3.0, 4.0], [1.0, 3.0, 2.0, 4.0])
    tsv = report.as_tsv()
    assert tsv.splitlines()[0] == "mae\tmse\tpearson\tn"
    doc = json.loads(report.as_json())
    assert doc["n"] == 4
    assert abs(doc["pearson"] - 0.8) < 1e-12
