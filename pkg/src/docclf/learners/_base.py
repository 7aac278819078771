"""Input validation and the shared classifier contract."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted


def check_features(X, n_features: int | None = None, *, non_negative=False) -> sp.csr_matrix:
    """Coerce to float64 CSR with finite values and, if given, a fixed width."""
    X = check_array(
        X, accept_sparse="csr", dtype=np.float64, ensure_min_samples=0, ensure_2d=True
    )
    X = sp.csr_matrix(X)
    X.sum_duplicates()
    X.eliminate_zeros()
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"X has {X.shape[1]} features, model expects {n_features}")
    if non_negative and X.nnz and X.data.min() < 0:
        raise ValueError("features must be non-negative")
    return X


def check_training(X, y, *, non_negative=False):
    X = check_features(X, non_negative=non_negative)
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("y must be one-dimensional")
    if X.shape[0] != len(y):
        raise ValueError(f"X has {X.shape[0]} rows but y has {len(y)}")
    if len(y) == 0:
        raise ValueError("cannot fit on zero samples")
    classes, y_idx = np.unique(y, return_inverse=True)
    return X, classes, y_idx.astype(np.int64)


def check_param(name, value, *, low=None, strict=False, integer=False):
    if integer and (isinstance(value, bool) or int(value) != value):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if low is not None and (value <= low if strict else value < low):
        op = ">" if strict else ">="
        raise ValueError(f"{name} must be {op} {low}, got {value!r}")


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class DocClassifier(ClassifierMixin, BaseEstimator):
    """Base for all learners.

    Subclasses implement ``_fit(X, y_idx)`` on class indices ``0..K-1`` and
    ``_proba(X)``. ``predict`` is the argmax of ``predict_proba`` with the
    lowest class winning ties. A model fit on one class predicts it with
    probability 1 without calling ``_fit``.
    """

    family: str = ""

    def fit(self, X, y):
        self._validate_params()
        X, classes, y_idx = check_training(X, y, non_negative=self._non_negative)
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        if len(classes) > 1:
            self._fit(X, y_idx)
        return self

    _non_negative = False

    def _validate_params(self):
        pass

    def _check_predict_input(self, X):
        check_is_fitted(self, "classes_")
        return check_features(X, self.n_features_in_)

    def predict_proba(self, X):
        X = self._check_predict_input(X)
        if len(self.classes_) == 1:
            return np.ones((X.shape[0], 1))
        return self._proba(X)

    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]

    def _fit(self, X, y):
        raise NotImplementedError

    def _proba(self, X):
        raise NotImplementedError
