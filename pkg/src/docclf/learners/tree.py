"""CART classification tree with Gini impurity."""

from __future__ import annotations

import numpy as np

from ._base import DocClassifier, check_param

# bound on the (rows x features x classes) cumulative-count block per chunk
_BLOCK = 4_000_000


def best_split(Xn: np.ndarray, yn: np.ndarray, n_classes: int, weights=None):
    """Exhaustive search for the (feature, threshold) pair minimizing the
    weighted Gini impurity of the two children.

    ``Xn`` is the dense node block (rows x features). Candidate thresholds are
    midpoints between consecutive distinct values. Returns
    ``(feature, threshold, score)`` where higher score is better, or ``None``
    when every feature is constant on the node. Ties go to the lowest feature,
    then the lowest threshold.
    """
    m = Xn.shape[0]
    if weights is None:
        weights = np.ones(m)
    varying = np.flatnonzero(Xn.max(axis=0) > Xn.min(axis=0))
    if len(varying) == 0:
        return None
    onehot = np.zeros((m, n_classes))
    onehot[np.arange(m), yn] = weights
    total = onehot.sum(axis=0)
    w_total = total.sum()

    best = None
    step = max(1, _BLOCK // max(1, m * n_classes))
    for start in range(0, len(varying), step):
        feats = varying[start : start + step]
        vals = Xn[:, feats]
        order = np.argsort(vals, axis=0, kind="stable")
        sorted_vals = np.take_along_axis(vals, order, axis=0)
        left = np.cumsum(onehot[order], axis=0)[:-1]  # (m-1, f, K)
        right = total - left
        w_left = left.sum(axis=2)
        w_right = w_total - w_left
        with np.errstate(divide="ignore", invalid="ignore"):
            score = (left**2).sum(axis=2) / w_left + (right**2).sum(axis=2) / w_right
        valid = (sorted_vals[1:] > sorted_vals[:-1]) & (w_left > 0) & (w_right > 0)
        score = np.where(valid, score, -np.inf).T  # (f, m-1): feature-major
        flat = int(np.argmax(score))
        fi, pos = divmod(flat, m - 1)
        if not np.isfinite(score[fi, pos]):
            continue
        if best is None or score[fi, pos] > best[2]:
            threshold = 0.5 * (sorted_vals[pos, fi] + sorted_vals[pos + 1, fi])
            best = (int(feats[fi]), float(threshold), float(score[fi, pos]))
    return best


class DecisionTreeClassifier(DocClassifier):
    """Binary CART tree; leaves hold class counts.

    Splitting stops on a pure node, at ``max_depth``, below
    ``min_samples_split`` rows, or when no feature varies. Zero-gain splits
    are allowed so that XOR-like structure can be learned.
    Leaf probabilities are Laplace corrected: ``(n_c + 1) / (n + K)``.
    """

    family = "decision_tree"

    def __init__(self, max_depth=32, min_samples_split=2):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split

    def _validate_params(self):
        check_param("max_depth", self.max_depth, low=1, integer=True)
        check_param("min_samples_split", self.min_samples_split, low=2, integer=True)

    def _fit(self, X, y):
        K = len(self.classes_)
        Xd = X.toarray()
        feature, threshold, left, right, counts = [], [], [], [], []

        def new_node(rows):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            counts.append(np.bincount(y[rows], minlength=K))
            return len(feature) - 1

        stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
        while stack:
            node, rows, depth = stack.pop()
            if (
                depth >= self.max_depth
                or len(rows) < self.min_samples_split
                or np.count_nonzero(counts[node]) <= 1
            ):
                continue
            split = best_split(Xd[rows], y[rows], K)
            if split is None:
                continue
            f, thr, _ = split
            go_left = Xd[rows, f] <= thr
            lrows, rrows = rows[go_left], rows[~go_left]
            feature[node], threshold[node] = f, thr
            left[node] = new_node(lrows)
            right[node] = new_node(rrows)
            # right pushed first so the left subtree is expanded first
            stack.append((right[node], rrows, depth + 1))
            stack.append((left[node], lrows, depth + 1))

        self.feature_ = np.array(feature, dtype=np.int64)
        self.threshold_ = np.array(threshold, dtype=np.float64)
        self.children_left_ = np.array(left, dtype=np.int64)
        self.children_right_ = np.array(right, dtype=np.int64)
        self.node_counts_ = np.array(counts, dtype=np.int64)

    def apply(self, X):
        """Leaf index reached by every row."""
        X = self._check_predict_input(X)
        node = np.zeros(X.shape[0], dtype=np.int64)
        if len(self.classes_) == 1:
            return node
        active = np.flatnonzero(self.feature_[node] >= 0)
        while len(active):
            feats = self.feature_[node[active]]
            vals = np.asarray(X[active, feats]).ravel()
            go_left = vals <= self.threshold_[node[active]]
            node[active] = np.where(
                go_left, self.children_left_[node[active]], self.children_right_[node[active]]
            )
            active = active[self.feature_[node[active]] >= 0]
        return node

    def _proba(self, X):
        leaf_counts = self.node_counts_[self.apply(X)].astype(np.float64)
        K = len(self.classes_)
        return (leaf_counts + 1.0) / (leaf_counts.sum(axis=1, keepdims=True) + K)

    @property
    def depth_(self) -> int:
        depth = np.zeros(len(self.feature_), dtype=np.int64)
        for i in range(len(self.feature_)):
            if self.feature_[i] >= 0:
                depth[self.children_left_[i]] = depth[self.children_right_[i]] = depth[i] + 1
        return int(depth.max())
