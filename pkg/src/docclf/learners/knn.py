from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ._base import DocClassifier, check_param


def _unit_rows(X: sp.csr_matrix) -> sp.csr_matrix:
    norms = np.sqrt(np.asarray(X.multiply(X).sum(axis=1)).ravel())
    norms[norms == 0] = 1.0
    return sp.csr_matrix(sp.diags(1.0 / norms) @ X)


class KNeighborsClassifier(DocClassifier):
    """Cosine-similarity k-NN with an unweighted majority vote.

    Neighbours tied on similarity are taken in training-row order; vote ties
    go to the lowest class index. ``predict_proba`` returns vote fractions.
    """

    family = "knn"

    def __init__(self, n_neighbors=13):
        self.n_neighbors = n_neighbors

    def _validate_params(self):
        check_param("n_neighbors", self.n_neighbors, low=1, integer=True)

    def _fit(self, X, y):
        self.fit_X_ = _unit_rows(X)
        self.fit_y_ = y

    def kneighbors(self, X):
        """Indices of the ``min(k, n_train)`` most similar training rows."""
        X = self._check_predict_input(X)
        sims = np.asarray((_unit_rows(X) @ self.fit_X_.T).todense())
        k = min(self.n_neighbors, self.fit_X_.shape[0])
        return np.argsort(-sims, axis=1, kind="stable")[:, :k]

    def _proba(self, X):
        neighbours = self.kneighbors(X)
        K = len(self.classes_)
        votes = np.zeros((X.shape[0], K))
        for j in range(neighbours.shape[1]):
            np.add.at(votes, (np.arange(X.shape[0]), self.fit_y_[neighbours[:, j]]), 1.0)
        return votes / neighbours.shape[1]
