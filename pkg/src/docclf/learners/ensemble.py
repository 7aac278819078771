from __future__ import annotations

import numpy as np
from sklearn.base import clone

from ._base import DocClassifier, check_training


class VotingPairClassifier(DocClassifier):
    """Majority vote of two base learners.

    With two voters a disagreement has no majority, so the base named by
    ``rank`` (the one that scored higher when the pair was chosen) decides.
    ``predict_proba`` is the mean of the base probabilities and so does not
    always agree with ``predict``.
    """

    family = "ensemble"

    def __init__(self, estimator_a=None, estimator_b=None, rank="a"):
        self.estimator_a = estimator_a
        self.estimator_b = estimator_b
        self.rank = rank

    def _validate_params(self):
        if self.rank not in ("a", "b"):
            raise ValueError(f"rank must be 'a' or 'b', got {self.rank!r}")
        for est in (self.estimator_a, self.estimator_b):
            if est is None or isinstance(est, VotingPairClassifier):
                raise ValueError("ensemble bases must be two non-ensemble learners")

    def fit(self, X, y):
        self._validate_params()
        X, classes, _ = check_training(X, y)
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        self.estimator_a_ = clone(self.estimator_a).fit(X, y)
        self.estimator_b_ = clone(self.estimator_b).fit(X, y)
        return self

    def _proba(self, X):
        return 0.5 * (self.estimator_a_.predict_proba(X) + self.estimator_b_.predict_proba(X))

    def predict_proba(self, X):
        X = self._check_predict_input(X)
        return self._proba(X)

    def predict(self, X):
        X = self._check_predict_input(X)
        a = self.estimator_a_.predict(X)
        b = self.estimator_b_.predict(X)
        return np.where(a == b, a, a if self.rank == "a" else b)
