import json
import warnings

import numpy as np
import pytest

from docclf.harness import persistence
from docclf.harness.persistence import ContainerError
from docclf.learners import BASE_FAMILIES, AlgorithmSpec, ensemble_spec
from docclf.ovr import OvRSelectionClassifier
from docclf.vectorizer import fit_vocabulary

from .conftest import random_tfidf


def _specs():
    return [AlgorithmSpec(f, seed=4) for f in BASE_FAMILIES] + [
        ensemble_spec(AlgorithmSpec("svm"), AlgorithmSpec("knn"))
    ]


@pytest.mark.parametrize("spec", _specs(), ids=lambda s: s.family)
def test_round_trip_every_family(spec, tmp_path):
    rng = np.random.default_rng(0)
    X = random_tfidf(rng, 40, 15)
    y = rng.integers(0, 3, 40)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        model = spec.build().fit(X, y)
    path = tmp_path / "m.json"
    vocab = fit_vocabulary([["aa", "bb"], ["aa"]], min_df=1)
    persistence.save(model, path, vocabulary=vocab, note="x")
    bundle = persistence.load_bundle(path)
    assert bundle.vocabulary == vocab and bundle.meta == {"note": "x"}
    Q = random_tfidf(rng, 100, 15)
    np.testing.assert_array_equal(model.predict_proba(Q), bundle.model.predict_proba(Q))
    np.testing.assert_array_equal(model.predict(Q), bundle.model.predict(Q))


def test_round_trip_ovr(tmp_path):
    rng = np.random.default_rng(1)
    X = random_tfidf(rng, 45, 10)
    y = rng.integers(0, 3, 45)
    roster = [AlgorithmSpec("naive_bayes"), AlgorithmSpec("logistic_regression")]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = OvRSelectionClassifier(roster=roster, n_folds=3).fit(X, y)
    path = tmp_path / "ovr.json"
    persistence.save(est.combined_, path)
    back = persistence.load(path)
    Q = random_tfidf(rng, 100, 10)
    assert back.predict_multilabel(Q) == est.combined_.predict_multilabel(Q)
    assert json.loads(path.read_text())["theta"] == 0.5


def test_version_mismatch_names_both(tmp_path):
    rng = np.random.default_rng(2)
    model = AlgorithmSpec("naive_bayes").build().fit(random_tfidf(rng, 6, 3), [0, 1] * 3)
    path = tmp_path / "m.json"
    persistence.save(model, path)
    data = json.loads(path.read_text())
    data["format_version"] = 99
    path.write_text(json.dumps(data))
    with pytest.raises(ContainerError, match="99.*1"):
        persistence.load(path)


def test_corrupt_container(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ContainerError):
        persistence.load(path)
    path.write_text(json.dumps({"format_version": 1, "kind": "model"}))
    with pytest.raises(ContainerError):
        persistence.load(path)
