"""Versioned JSON model containers.

A single model is ``{format_version, kind: "model", family, hyperparameters,
seed, vocabulary_ref, parameters}``. A combined one-vs-rest model is
``{format_version, kind: "ovr", theta, classes: [{class_name, selection_f1,
algorithm, model}], vocabulary}``. Arrays are stored as
``{"dtype", "shape", "data"}``; floats survive the round trip exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..learners import FAMILIES, AlgorithmSpec, DocClassifier
from ..ovr import ClassEntry, OvRCombinedModel
from ..vectorizer import Vocabulary

FORMAT_VERSION = 1


class ContainerError(ValueError):
    pass


FITTED_ATTRS = {
    "decision_tree": ["feature_", "threshold_", "children_left_", "children_right_",
                      "node_counts_"],
    "naive_bayes": ["class_log_prior_", "feature_log_prob_"],
    "knn": ["fit_X_", "fit_y_"],
    "logistic_regression": ["coef_", "intercept_", "converged_", "n_iter_"],
    "adaboost": ["stump_feature_", "stump_threshold_", "stump_left_class_",
                 "stump_right_class_", "estimator_weights_", "estimator_errors_",
                 "constant_class_"],
    "sgd": ["coef_", "intercept_", "t_"],
    "svm": ["coef_", "intercept_"],
    "ensemble": ["estimator_a_", "estimator_b_"],
}


def _encode(value):
    if isinstance(value, DocClassifier):
        return {"model": model_to_container(value)}
    if sp.issparse(value):
        value = sp.csr_matrix(value)
        return {
            "csr_shape": list(value.shape),
            "rows": [
                [value.indices[lo:hi].tolist(), value.data[lo:hi].tolist()]
                for lo, hi in zip(value.indptr[:-1], value.indptr[1:])
            ],
        }
    if isinstance(value, np.ndarray):
        return {"dtype": value.dtype.str, "shape": list(value.shape),
                "data": value.ravel().tolist()}
    if isinstance(value, np.generic):
        return value.item()
    return value


def _decode(value):
    if isinstance(value, dict):
        if "model" in value:
            return model_from_container(value["model"])
        if "csr_shape" in value:
            n_rows, n_cols = value["csr_shape"]
            indptr, indices, data = [0], [], []
            for idx, vals in value["rows"]:
                indices.extend(idx)
                data.extend(vals)
                indptr.append(len(indices))
            return sp.csr_matrix(
                (np.array(data, dtype=np.float64), np.array(indices, dtype=np.int64),
                 np.array(indptr, dtype=np.int64)),
                shape=(n_rows, n_cols),
            )
        if "dtype" in value:
            dtype = np.dtype(value["dtype"])
            if dtype.kind in "OUS":
                return np.array(value["data"], dtype=object if dtype.kind == "O" else dtype)
            return np.array(value["data"], dtype=dtype).reshape(value["shape"])
    return value


def model_to_container(model: DocClassifier, vocabulary_ref: str | None = None) -> dict:
    family = model.family
    params = {
        k: v for k, v in model.get_params(deep=False).items()
        if not isinstance(v, DocClassifier)
    }
    parameters = {
        "classes_": _encode(np.asarray(model.classes_)),
        "n_features_in_": int(model.n_features_in_),
    }
    for attr in FITTED_ATTRS[family]:
        if hasattr(model, attr):
            parameters[attr] = _encode(getattr(model, attr))
    return {
        "format_version": FORMAT_VERSION,
        "kind": "model",
        "family": family,
        "hyperparameters": params,
        "seed": int(params.get("random_state", 0) or 0),
        "vocabulary_ref": vocabulary_ref,
        "parameters": parameters,
    }


def _check_version(container: dict):
    if not isinstance(container, dict) or "format_version" not in container:
        raise ContainerError("not a model container (no format_version)")
    found = container["format_version"]
    if found != FORMAT_VERSION:
        raise ContainerError(
            f"container format_version {found!r} does not match supported "
            f"version {FORMAT_VERSION}"
        )


def model_from_container(container: dict) -> DocClassifier:
    _check_version(container)
    try:
        cls = FAMILIES[container["family"]]
        params = container["parameters"]
        hyper = dict(container["hyperparameters"])
        if container["family"] == "ensemble":
            # bases are restored fitted; the unfitted templates are not needed
            hyper["estimator_a"] = _decode(params["estimator_a_"])
            hyper["estimator_b"] = _decode(params["estimator_b_"])
        model = cls(**hyper)
        for key, value in params.items():
            setattr(model, key, _decode(value))
    except (KeyError, TypeError) as exc:
        raise ContainerError(f"corrupt model container: {exc!r}") from None
    return model


def ovr_to_container(model: OvRCombinedModel, vocabulary: Vocabulary | None = None) -> dict:
    vocabulary = vocabulary if vocabulary is not None else model.vocabulary
    return {
        "format_version": FORMAT_VERSION,
        "kind": "ovr",
        "theta": model.theta,
        "classes": [
            {
                "class_name": e.class_name,
                "selection_f1": e.selection_f1,
                "algorithm": e.spec.to_dict(),
                "model": model_to_container(e.model),
            }
            for e in model.entries
        ],
        "vocabulary": vocabulary.to_dict() if vocabulary is not None else None,
    }


def ovr_from_container(container: dict) -> OvRCombinedModel:
    _check_version(container)
    try:
        vocab = container.get("vocabulary")
        entries = [
            ClassEntry(
                class_name=c["class_name"],
                spec=AlgorithmSpec.from_dict(c["algorithm"]),
                model=model_from_container(c["model"]),
                selection_f1=float(c["selection_f1"]),
            )
            for c in container["classes"]
        ]
        return OvRCombinedModel(
            entries, float(container["theta"]),
            Vocabulary.from_dict(vocab) if vocab else None,
        )
    except (KeyError, TypeError) as exc:
        raise ContainerError(f"corrupt OvR container: {exc!r}") from None


@dataclass
class Bundle:
    """A model with the vocabulary and pipeline settings needed to use it."""

    model: object
    vocabulary: Vocabulary | None = None
    meta: dict = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return "ovr" if isinstance(self.model, OvRCombinedModel) else "model"


def bundle_to_container(bundle: Bundle) -> dict:
    if bundle.kind == "ovr":
        container = ovr_to_container(bundle.model, bundle.vocabulary)
    else:
        ref = "vocabulary" if bundle.vocabulary is not None else None
        container = model_to_container(bundle.model, vocabulary_ref=ref)
        if bundle.vocabulary is not None:
            container["vocabulary"] = bundle.vocabulary.to_dict()
    if bundle.meta:
        container["pipeline"] = bundle.meta
    return container


def bundle_from_container(container: dict) -> Bundle:
    _check_version(container)
    kind = container.get("kind", "model")
    if kind == "ovr":
        model = ovr_from_container(container)
        vocab = model.vocabulary
    elif kind == "model":
        model = model_from_container(container)
        ref = container.get("vocabulary_ref")
        vocab = Vocabulary.from_dict(container[ref]) if ref else None
    else:
        raise ContainerError(f"unknown container kind {kind!r}")
    return Bundle(model, vocab, container.get("pipeline", {}))


def save(model, path, vocabulary: Vocabulary | None = None, **meta) -> None:
    bundle = model if isinstance(model, Bundle) else Bundle(model, vocabulary, meta)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bundle_to_container(bundle), fh, sort_keys=True)
        fh.write("\n")


def load_bundle(path) -> Bundle:
    try:
        with open(path, encoding="utf-8") as fh:
            container = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ContainerError(f"{path}: not valid JSON ({exc.msg})") from None
    return bundle_from_container(container)


def load(path):
    return load_bundle(path).model
