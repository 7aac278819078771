"""One-vs-rest model selection: the best learner per class, combined.

For every class the labels are binarized, each roster algorithm is scored by
its positive-class F1 (stratified k-fold by default, or on a held-out set),
and the winner's model becomes that class's scorer in an
:class:`OvRCombinedModel`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .corpus import binarize
from .learners import AlgorithmSpec, DocClassifier, check_features, ensemble_spec
from .metrics import ClassMetrics, binary_metrics, prf1, class_counts, confusion
from .resampler import ResampleSpec, oversample

# fold slot used for the final refit on the whole training set
FULL_FIT = -1


def derive_seed(master: int, *keys: int) -> int:
    """Independent 32-bit stream seed for a (class, algorithm, fold) task."""
    entropy = [int(master)] + [int(k) + 1 for k in keys]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def stratified_folds(y, n_folds: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Deterministic stratified k-fold: each class is shuffled and dealt
    round-robin over the folds. Folds left without rows are dropped."""
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(y), dtype=np.int64)
    offset = 0
    for c in np.unique(y):
        members = np.flatnonzero(y == c)
        members = members[rng.permutation(len(members))]
        fold_of[members] = (np.arange(len(members)) + offset) % n_folds
        offset += len(members)
    folds = []
    for k in range(n_folds):
        val = np.flatnonzero(fold_of == k)
        if len(val) and len(val) < len(y):
            folds.append((np.flatnonzero(fold_of != k), val))
    return folds


def positive_score(model: DocClassifier, X) -> np.ndarray:
    """Probability of label 1 from a binary model, 0 if it never saw label 1."""
    classes = list(model.classes_)
    if 1 not in classes:
        return np.zeros(X.shape[0])
    return model.predict_proba(X)[:, classes.index(1)]


@dataclass
class Candidate:
    spec: AlgorithmSpec
    model: DocClassifier
    selection_f1: float
    metrics: ClassMetrics


@dataclass
class PerClassResult:
    class_index: int
    candidates: list[Candidate]
    winner: int

    @property
    def best(self) -> Candidate:
        return self.candidates[self.winner]


def _fit_binary(spec, X, yb, resample, seed):
    if resample is not None:
        X, yb = oversample(X, yb, ResampleSpec(resample, seed))
    return spec.with_seed(seed).build().fit(X, yb)


def _pair_for_ensemble(specs, scores):
    """The two best-scoring base specs, higher first (roster order on ties)."""
    bases = [i for i, s in enumerate(specs) if s.family != "ensemble"]
    if len(bases) < 2:
        raise ValueError("an ensemble needs at least two base algorithms in the roster")
    ranked = sorted(bases, key=lambda i: (-scores[i], i))
    return specs[ranked[0]], specs[ranked[1]]


def train_class_roster(
    c: int,
    roster,
    X_train,
    y_train,
    *,
    selection: str = "cv",
    n_folds: int = 5,
    heldout=None,
    resample="max",
    seed: int = 0,
    n_classes: int | None = None,
) -> PerClassResult:
    """Score every roster algorithm on the binarized task for class ``c``.

    ``selection`` is ``"cv"`` (stratified ``n_folds`` on the training rows,
    oversampling inside each training fold) or ``"heldout"`` (``heldout`` is
    an ``(X, y)`` pair in multiclass labels). Every algorithm is refit on the
    whole oversampled training set. An ensemble spec without bases pairs
    the two best-scoring base algorithms for this class.
    """
    roster = list(roster)
    if not roster:
        raise ValueError("roster is empty")
    X_train = check_features(X_train)
    y_train = np.asarray(y_train)
    yb = binarize(y_train, c, n_classes)
    if not yb.any():
        raise ValueError(f"class {c} has no training documents")
    if selection not in ("cv", "heldout"):
        raise ValueError(f"unknown selection mode {selection!r}")
    if selection == "heldout":
        if heldout is None:
            raise ValueError("heldout selection needs a heldout (X, y) pair")
        X_sel = check_features(heldout[0], X_train.shape[1])
        yb_sel = binarize(heldout[1], c, n_classes)
    else:
        folds = stratified_folds(yb, n_folds, derive_seed(seed, c))

    # base algorithms first, so that auto ensembles can be paired
    order = [i for i, s in enumerate(roster) if not s.is_auto_ensemble]
    order += [i for i, s in enumerate(roster) if s.is_auto_ensemble]
    resolved = list(roster)
    scores = [float("-inf")] * len(roster)
    candidates: list[Candidate | None] = [None] * len(roster)
    for a in order:
        spec = roster[a]
        if spec.is_auto_ensemble:
            base_a, base_b = _pair_for_ensemble(resolved, scores)
            spec = ensemble_spec(base_a, base_b, spec.seed)
        resolved[a] = spec
        full = _fit_binary(spec, X_train, yb, resample, derive_seed(seed, c, a, FULL_FIT))
        if selection == "heldout":
            _, metrics = binary_metrics(yb_sel, full.predict(X_sel))
            score = metrics.f1
        else:
            fold_f1, y_true, y_pred = [], [], []
            for k, (tr, va) in enumerate(folds):
                model = _fit_binary(
                    spec, X_train[tr], yb[tr], resample, derive_seed(seed, c, a, k)
                )
                pred = model.predict(X_train[va])
                fold_f1.append(binary_metrics(yb[va], pred)[1].f1)
                y_true.append(yb[va])
                y_pred.append(pred)
            score = float(np.mean(fold_f1)) if fold_f1 else 0.0
            if y_true:
                cm = confusion(np.concatenate(y_true), np.concatenate(y_pred), 2)
                metrics = prf1(class_counts(cm, 1))
            else:
                metrics = ClassMetrics(0.0, 0.0, 0.0, 0)
        scores[a] = score
        candidates[a] = Candidate(spec, full, score, metrics)

    winner = max(range(len(roster)), key=lambda i: (scores[i], -i))
    return PerClassResult(c, candidates, winner)


@dataclass
class ClassEntry:
    class_name: str
    spec: AlgorithmSpec
    model: DocClassifier
    selection_f1: float


@dataclass
class OvRCombinedModel:
    """One binary scorer per class.

    Multi-label output keeps every class whose positive-class probability
    reaches ``theta``; single-label output is the arg-max class regardless
    of ``theta``.
    """

    entries: list[ClassEntry]
    theta: float = 0.5
    vocabulary: object = field(default=None, repr=False)

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        widths = {e.model.n_features_in_ for e in self.entries}
        if len(widths) > 1:
            raise ValueError(f"class models disagree on feature count: {sorted(widths)}")

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(e.class_name for e in self.entries)

    @property
    def n_features_in_(self) -> int:
        return self.entries[0].model.n_features_in_

    def scores(self, X) -> np.ndarray:
        X = check_features(X, self.n_features_in_)
        return np.column_stack([positive_score(e.model, X) for e in self.entries])

    def predict_multilabel(self, X) -> list[list[tuple[int, float]]]:
        out = []
        for row in self.scores(X):
            hits = [(int(c), float(row[c])) for c in np.flatnonzero(row >= self.theta)]
            hits.sort(key=lambda h: (-h[1], h[0]))
            out.append(hits)
        return out

    def predict_single(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Arg-max class (lowest index on ties) and its score, per row."""
        S = self.scores(X)
        best = np.argmax(S, axis=1)
        return best, S[np.arange(len(best)), best]

    def predict(self, X) -> np.ndarray:
        return self.predict_single(X)[0]


def build_combined(results, class_names, theta: float = 0.5, vocabulary=None) -> OvRCombinedModel:
    by_class = {}
    for r in results:
        if r.class_index in by_class:
            raise ValueError(f"duplicate result for class {r.class_index}")
        by_class[r.class_index] = r
    missing = [c for c in range(len(class_names)) if c not in by_class]
    if missing:
        raise ValueError(f"missing per-class results for classes {missing}")
    extra = sorted(set(by_class) - set(range(len(class_names))))
    if extra:
        raise ValueError(f"results for unknown classes {extra}")
    entries = [
        ClassEntry(class_names[c], by_class[c].best.spec, by_class[c].best.model,
                   by_class[c].best.selection_f1)
        for c in range(len(class_names))
    ]
    return OvRCombinedModel(entries, theta, vocabulary)


class OvRSelectionClassifier(ClassifierMixin, BaseEstimator):
    """Estimator form of per-class selection; ``predict`` is single-label."""

    def __init__(self, roster=None, n_folds=5, resample="max", theta=0.5, random_state=0):
        self.roster = roster
        self.n_folds = n_folds
        self.resample = resample
        self.theta = theta
        self.random_state = random_state

    def fit(self, X, y):
        from .learners import default_roster

        X = check_features(X)
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        y_idx = np.searchsorted(self.classes_, y)
        roster = self.roster if self.roster is not None else default_roster(self.random_state)
        self.results_ = [
            train_class_roster(
                c, roster, X, y_idx, n_folds=self.n_folds, resample=self.resample,
                seed=self.random_state, n_classes=len(self.classes_),
            )
            for c in range(len(self.classes_))
        ]
        names = tuple(str(c) for c in self.classes_)
        self.combined_ = build_combined(self.results_, names, self.theta)
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        """Per-class scores normalized to sum to one."""
        S = self.combined_.scores(X)
        totals = S.sum(axis=1, keepdims=True)
        uniform = np.full_like(S, 1.0 / S.shape[1])
        return np.where(totals > 0, S / np.where(totals > 0, totals, 1.0), uniform)

    def predict(self, X):
        return self.classes_[self.combined_.predict(X)]
