"""End-to-end smoke checks for the python surface over the shipped data."""

import json
import os

import numpy as np
import pytest

import simnn

DATA_DIR = os.environ.get("SIMNN_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


@pytest.fixture(scope="module")
def outcome_task():
    files = [os.path.join(DATA_DIR, "horse-colic.data"), os.path.join(DATA_DIR, "horse-colic.test")]
    return simnn.derive_task(simnn.load_dataset(files), "HC24")


def test_shipped_data_shape():
    files = [os.path.join(DATA_DIR, "horse-colic.data"), os.path.join(DATA_DIR, "horse-colic.test")]
    data = simnn.load_dataset(files)
    assert len(data) == 368
    assert len(simnn.derive_task(data, "HC23")) == 366
    assert abs(data.missing_fraction() - 0.30) <= 0.02
    # the shipped descriptor text parses to the built-in schema
    explicit = simnn.load_dataset(files, schema_text=simnn.horse_colic_schema_text())
    assert explicit.schema_text == data.schema_text


def test_similarity_matrix_properties(outcome_task):
    small = outcome_task.subset(range(40))
    m = simnn.similarity_matrix(small)
    assert m.shape == (40, 40)
    assert np.allclose(m, m.T, atol=0.0)  # symmetry is exact
    assert m.min() >= 0.0 and m.max() <= 1.0


def test_cluster_threshold_extremes(outcome_task):
    small = outcome_task.subset(range(30))
    leaders, assignment = simnn.cluster(small, s_min=0.999999)
    assert len(leaders) == 30  # distinct rows all become leaders
    assert sorted(assignment) == list(range(30))
    leaders, assignment = simnn.cluster(small, s_min=0.0)
    assert len(leaders) == 1 and set(assignment) == {0}


@pytest.mark.parametrize("method,kwargs", [("snn", {"s_min": 0.6}), ("rbf2", {"s_min": 0.6}), ("rbfk", {"k": 4})])
def test_train_predict_roundtrip(outcome_task, method, kwargs):
    train_fold = outcome_task.subset(range(0, 120))
    test_fold = outcome_task.subset(range(120, 160))
    model = simnn.train(train_fold, method=method, seed=7, **kwargs)
    assert model.kind == method
    labels, scores = model.predict(test_fold)
    assert len(labels) == 40 and scores.shape == (40, len(model.class_labels))
    assert set(labels) <= set(model.class_labels)

    doc = model.to_json()
    assert json.loads(doc)["model"] == ("snn" if method == "snn" else "rbf")
    reloaded = simnn.model_from_json(doc)
    relabels, rescores = reloaded.predict(test_fold)
    assert relabels == labels
    assert np.array_equal(rescores, scores)  # byte-identical reload, bit-identical scores


def test_error_band_on_holdout(outcome_task):
    train_fold = outcome_task.subset(range(0, 180))
    test_fold = outcome_task.subset(range(180, 360))
    model = simnn.train(train_fold, method="snn", s_min=0.6)
    labels, _ = model.predict(test_fold)
    truth = test_fold.target_labels()
    error = sum(a != b for a, b in zip(labels, truth)) / len(truth)
    assert error < 0.45  # well below always-guess-the-majority


def test_validation_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        simnn.parse_dataset("a b\n", "not a schema")
    with pytest.raises(Exception):
        simnn.model_from_json("{}")
