from __future__ import annotations

import warnings

import numpy as np

from ._base import DocClassifier, check_param, softmax

_BLOCK = 4_000_000
# weighted error floor; bounds alpha for a perfect stump
_MIN_ERROR = 1e-10


class _Stumps:
    """Weighted decision-stump search over presorted dense columns."""

    def __init__(self, Xd: np.ndarray, n_classes: int):
        self.Xd = Xd
        self.K = n_classes
        self.varying = np.flatnonzero(Xd.max(axis=0) > Xd.min(axis=0))
        self.order = np.argsort(Xd[:, self.varying], axis=0, kind="stable")
        self.sorted_vals = np.take_along_axis(Xd[:, self.varying], self.order, axis=0)
        self.distinct = self.sorted_vals[1:] > self.sorted_vals[:-1]

    def best(self, y, w):
        """Stump ``(feature, threshold, left_class, right_class)`` with the
        largest weighted mass of correct predictions."""
        n, K = len(y), self.K
        onehot = np.zeros((n, K))
        onehot[np.arange(n), y] = w
        total = onehot.sum(axis=0)
        best, best_correct = None, -np.inf
        step = max(1, _BLOCK // max(1, n * K))
        for start in range(0, len(self.varying), step):
            sl = slice(start, start + step)
            left = np.cumsum(onehot[self.order[:, sl]], axis=0)[:-1]
            right = total - left
            correct = left.max(axis=2) + right.max(axis=2)
            correct = np.where(self.distinct[:, sl], correct, -np.inf).T
            flat = int(np.argmax(correct))
            fi, pos = divmod(flat, n - 1)
            if correct[fi, pos] > best_correct:
                best_correct = correct[fi, pos]
                col = start + fi
                thr = 0.5 * (self.sorted_vals[pos, col] + self.sorted_vals[pos + 1, col])
                best = (
                    int(self.varying[col]),
                    float(thr),
                    int(np.argmax(left[pos, fi])),
                    int(np.argmax(right[pos, fi])),
                )
        return best


class AdaBoostClassifier(DocClassifier):
    """SAMME boosting of depth-1 stumps.

    Round weight ``alpha = ln((1 - err) / err) + ln(K - 1)``. A round whose
    weighted error reaches ``1 - 1/K`` is discarded and boosting stops; a
    perfect stump is kept with a capped weight and boosting stops.
    ``predict_proba`` is a softmax of the vote scores divided by the total
    stump weight.
    """

    family = "adaboost"

    def __init__(self, n_estimators=50):
        self.n_estimators = n_estimators

    def _validate_params(self):
        check_param("n_estimators", self.n_estimators, low=1, integer=True)

    def _fit(self, X, y):
        K = len(self.classes_)
        n = len(y)
        stumps = _Stumps(X.toarray(), K)
        w = np.full(n, 1.0 / n)
        params, alphas, errors = [], [], []
        self.constant_class_ = -1
        if len(stumps.varying):
            for _ in range(self.n_estimators):
                f, thr, lc, rc = stumps.best(y, w)
                pred = np.where(stumps.Xd[:, f] <= thr, lc, rc)
                miss = pred != y
                err = float(w[miss].sum() / w.sum())
                if err >= 1.0 - 1.0 / K:
                    break
                alpha = np.log((1.0 - max(err, _MIN_ERROR)) / max(err, _MIN_ERROR))
                alpha += np.log(K - 1)
                params.append((f, thr, lc, rc))
                alphas.append(alpha)
                errors.append(err)
                if err <= 0.0:
                    break
                w = w * np.exp(alpha * miss)
                w /= w.sum()
        if not params:
            self.constant_class_ = int(np.argmax(np.bincount(y, minlength=K)))
            warnings.warn(
                "no stump beats chance; falling back to a constant majority-class model",
                stacklevel=3,
            )
        p = np.array(params, dtype=np.float64).reshape(-1, 4)
        self.stump_feature_ = p[:, 0].astype(np.int64)
        self.stump_threshold_ = p[:, 1]
        self.stump_left_class_ = p[:, 2].astype(np.int64)
        self.stump_right_class_ = p[:, 3].astype(np.int64)
        self.estimator_weights_ = np.array(alphas, dtype=np.float64)
        self.estimator_errors_ = np.array(errors, dtype=np.float64)

    def decision_function(self, X):
        """Per-class vote totals ``sum_t alpha_t * [stump_t(x) == c]``."""
        X = self._check_predict_input(X)
        K = len(self.classes_)
        scores = np.zeros((X.shape[0], K))
        rows = np.arange(X.shape[0])
        X = X.tocsc()
        for f, thr, lc, rc, a in zip(
            self.stump_feature_,
            self.stump_threshold_,
            self.stump_left_class_,
            self.stump_right_class_,
            self.estimator_weights_,
        ):
            col = X[:, f].toarray().ravel()
            scores[rows, np.where(col <= thr, lc, rc)] += a
        return scores

    def _proba(self, X):
        if self.constant_class_ >= 0:
            proba = np.zeros((X.shape[0], len(self.classes_)))
            proba[:, self.constant_class_] = 1.0
            return proba
        scores = self.decision_function(X)
        return softmax(scores / self.estimator_weights_.sum())
