"""Confusion matrices and the precision / recall / F1 family.

All ratios use the 0/0 -> 0 convention. Weighted averages weight each class
by its support (row sum of the confusion matrix).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise ValueError("confusion matrix must be square")
        if (counts < 0).any():
            raise ValueError("confusion counts must be non-negative")
        if len(self.class_names) != counts.shape[0]:
            raise ValueError("class_names does not match matrix size")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class BinaryCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    class_names: tuple[str, ...]
    per_class: tuple[ClassMetrics, ...]
    accuracy: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["class", "precision", "recall", "f1", "support"])
        for name, m in zip(self.class_names, self.per_class):
            writer.writerow([name, repr(m.precision), repr(m.recall), repr(m.f1), m.support])
        total = sum(m.support for m in self.per_class)
        writer.writerow(["accuracy", "", "", repr(self.accuracy), total])
        writer.writerow(
            [
                "weighted avg",
                repr(self.weighted_precision),
                repr(self.weighted_recall),
                repr(self.weighted_f1),
                total,
            ]
        )
        return buf.getvalue()

    def to_markdown(self) -> str:
        width = max([len("Weighted Avg F-1"), *(len(n) for n in self.class_names)])
        lines = [
            f"| {'Class':<{width}} | Precision | Recall | F-1  |",
            f"|{'-' * (width + 2)}|-----------|--------|------|",
        ]
        for name, m in zip(self.class_names, self.per_class):
            lines.append(
                f"| {name:<{width}} | {m.precision:>9.2f} | {m.recall:>6.2f} | {m.f1:.2f} |"
            )
        lines.append(f"| {'Accuracy':<{width}} | {'':>9} | {'':>6} | {self.accuracy:.2f} |")
        lines.append(
            f"| {'Weighted Avg F-1':<{width}} | {self.weighted_precision:>9.2f} "
            f"| {self.weighted_recall:>6.2f} | {self.weighted_f1:.2f} |"
        )
        return "\n".join(lines) + "\n"


def _ratio(num, den) -> float:
    return float(num) / float(den) if den else 0.0


def confusion(y_true, y_pred, n_classes: int, class_names=None) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise ValueError(f"length mismatch: {y_true.shape} vs {y_pred.shape}")
    for arr in (y_true, y_pred):
        if len(arr) and (arr.min() < 0 or arr.max() >= n_classes):
            raise ValueError(f"label outside [0, {n_classes})")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    if class_names is None:
        class_names = tuple(str(i) for i in range(n_classes))
    return ConfusionMatrix(counts, tuple(class_names))


def class_counts(cm: ConfusionMatrix, c: int) -> BinaryCounts:
    if not 0 <= c < cm.n_classes:
        raise ValueError(f"class {c} out of range")
    counts = cm.counts
    tp = int(counts[c, c])
    fp = int(counts[:, c].sum()) - tp
    fn = int(counts[c, :].sum()) - tp
    return BinaryCounts(tp=tp, fp=fp, fn=fn, tn=cm.total - tp - fp - fn)


def f1_from_pr(precision: float, recall: float) -> float:
    s = precision + recall
    return 2.0 * precision * recall / s if s > 0 else 0.0


def prf1(counts: BinaryCounts) -> ClassMetrics:
    p = _ratio(counts.tp, counts.tp + counts.fp)
    r = _ratio(counts.tp, counts.tp + counts.fn)
    return ClassMetrics(p, r, f1_from_pr(p, r), counts.tp + counts.fn)


def _count_f1(counts: BinaryCounts) -> float:
    return _ratio(2 * counts.tp, 2 * counts.tp + counts.fp + counts.fn)


def weighted_f1(cm: ConfusionMatrix) -> float:
    """Support-weighted mean of ``2tp / (2tp + fp + fn)`` over classes."""
    if cm.total == 0:
        raise ValueError("weighted F1 of an empty confusion matrix")
    support = cm.support
    f1s = [_count_f1(class_counts(cm, c)) for c in range(cm.n_classes)]
    return float(np.dot(support, f1s)) / float(support.sum())


def accuracy(cm: ConfusionMatrix) -> float:
    if cm.total == 0:
        raise ValueError("accuracy of an empty confusion matrix")
    return float(np.trace(cm.counts)) / cm.total


def report(cm: ConfusionMatrix) -> ClassificationReport:
    if cm.total == 0:
        raise ValueError("report of an empty confusion matrix")
    per_class = tuple(prf1(class_counts(cm, c)) for c in range(cm.n_classes))
    support = cm.support.astype(np.float64)
    total = support.sum()

    def wavg(values):
        return float(np.dot(support, values)) / total

    return ClassificationReport(
        class_names=cm.class_names,
        per_class=per_class,
        accuracy=accuracy(cm),
        weighted_precision=wavg([m.precision for m in per_class]),
        weighted_recall=wavg([m.recall for m in per_class]),
        weighted_f1=wavg([m.f1 for m in per_class]),
    )


def binary_metrics(y_true, y_pred) -> tuple[float, ClassMetrics]:
    """Accuracy and positive-class metrics for 0/1 labels."""
    cm = confusion(y_true, y_pred, 2, ("rest", "positive"))
    return accuracy(cm), prf1(class_counts(cm, 1))
