from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from ._base import DocClassifier, check_param


class MultinomialNB(DocClassifier):
    """Multinomial naive Bayes treating TF-IDF weights as fractional counts.

    ``log P(t | c) = ln((W_ct + alpha) / (sum_t' W_ct' + alpha * V))`` where
    ``W_ct`` sums the weight of term ``t`` over the documents of class ``c``.
    """

    family = "naive_bayes"
    _non_negative = True

    def __init__(self, alpha=1.0):
        self.alpha = alpha

    def _validate_params(self):
        check_param("alpha", self.alpha, low=0, strict=True)

    def _fit(self, X, y):
        K, V = len(self.classes_), X.shape[1]
        class_counts = np.bincount(y, minlength=K).astype(np.float64)
        self.class_log_prior_ = np.log(class_counts / class_counts.sum())
        onehot = np.zeros((len(y), K))
        onehot[np.arange(len(y)), y] = 1.0
        term_weight = np.asarray((X.T @ onehot).T)  # (K, V)
        smoothed = term_weight + self.alpha
        self.feature_log_prob_ = np.log(smoothed) - np.log(
            smoothed.sum(axis=1, keepdims=True)
        )
        if V == 0:
            self.feature_log_prob_ = np.zeros((K, 0))

    def joint_log_likelihood(self, X):
        X = self._check_predict_input(X)
        return np.asarray(X @ self.feature_log_prob_.T) + self.class_log_prior_

    def _proba(self, X):
        if X.nnz and X.data.min() < 0:
            raise ValueError("features must be non-negative")
        jll = self.joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))
