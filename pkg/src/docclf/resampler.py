"""Random oversampling of minority classes by duplicating existing rows."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator

Target = Union[str, int, Mapping[int, int]]


@dataclass(frozen=True)
class ResampleSpec:
    """``target`` is ``"max"``, one integer for every class, or a per-class mapping."""

    target: Target = "max"
    seed: int = 0

    def __post_init__(self):
        t = self.target
        if isinstance(t, str):
            if t != "max":
                raise ValueError(f"unknown oversampling target {t!r}")
        elif isinstance(t, Mapping):
            if any(int(v) < 1 for v in t.values()):
                raise ValueError("fixed oversampling targets must be >= 1")
        elif int(t) < 1:
            raise ValueError("fixed oversampling target must be >= 1")

    def targets(self, counts: Mapping[int, int]) -> dict[int, int]:
        t = self.target
        if t == "max":
            top = max(counts.values())
            return {c: top for c in counts}
        if isinstance(t, Mapping):
            return {int(c): int(v) for c, v in t.items()}
        return {c: int(t) for c in counts}


def oversample_indices(y, spec: ResampleSpec = ResampleSpec()) -> np.ndarray:
    """Row indices of the oversampled set.

    Original rows come first in their input order, then the duplicates
    grouped by ascending class index. Classes at or above target are untouched.
    """
    y = np.asarray(y)
    if len(y) == 0:
        return np.arange(0)
    classes, counts = np.unique(y, return_counts=True)
    targets = spec.targets(dict(zip(classes.tolist(), counts.tolist())))
    present = set(classes.tolist())
    missing = sorted(c for c in targets if c not in present)
    if missing:
        raise ValueError(f"cannot oversample classes with no rows: {missing}")

    rng = np.random.default_rng(spec.seed)
    rows = [np.arange(len(y))]
    for c, n in zip(classes.tolist(), counts.tolist()):
        need = targets.get(c, n) - n
        if need > 0:
            members = np.flatnonzero(y == c)
            rows.append(members[rng.integers(0, n, size=need)])
    return np.concatenate(rows)


def oversample(X, y, spec: ResampleSpec = ResampleSpec()):
    """Raise every class count to its target by sampling its rows with replacement."""
    y = np.asarray(y)
    if X.shape[0] != len(y):
        raise ValueError(f"X has {X.shape[0]} rows but y has {len(y)}")
    rows = oversample_indices(y, spec)
    if len(rows) == len(y):
        return X, y
    X_out = X[rows]
    if sp.issparse(X_out):
        X_out = sp.csr_matrix(X_out)
    return X_out, y[rows]


class RandomOverSampler(BaseEstimator):
    """``fit_resample`` interface in the style of imbalanced-learn."""

    def __init__(self, target="max", random_state=0):
        self.target = target
        self.random_state = random_state

    def fit_resample(self, X, y):
        spec = ResampleSpec(self.target, int(self.random_state or 0))
        if X.shape[0] != len(y):
            raise ValueError(f"X has {X.shape[0]} rows but y has {len(y)}")
        self.sample_indices_ = oversample_indices(y, spec)
        return X[self.sample_indices_], np.asarray(y)[self.sample_indices_]
