"""The seven learner families plus the two-model voting ensemble."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from sklearn.base import clone

from ._base import DocClassifier, check_features, softmax
from .adaboost import AdaBoostClassifier
from .ensemble import VotingPairClassifier
from .knn import KNeighborsClassifier
from .linear import LinearSVC, LogisticRegression, SGDClassifier, logistic_loss_grad
from .naive_bayes import MultinomialNB
from .tree import DecisionTreeClassifier

FAMILIES: dict[str, type[DocClassifier]] = {
    "decision_tree": DecisionTreeClassifier,
    "naive_bayes": MultinomialNB,
    "knn": KNeighborsClassifier,
    "logistic_regression": LogisticRegression,
    "adaboost": AdaBoostClassifier,
    "sgd": SGDClassifier,
    "svm": LinearSVC,
    "ensemble": VotingPairClassifier,
}

ALIASES = {
    "tree": "decision_tree",
    "nb": "naive_bayes",
    "knn": "knn",
    "logreg": "logistic_regression",
    "ada": "adaboost",
    "sgd": "sgd",
    "svm": "svm",
    "ensemble": "ensemble",
}

# roster order is also the tie-break order for model selection
BASE_FAMILIES = (
    "decision_tree",
    "naive_bayes",
    "knn",
    "logistic_regression",
    "adaboost",
    "sgd",
    "svm",
)

DISPLAY_NAMES = {
    "decision_tree": "Decision trees",
    "naive_bayes": "Naive Bayes",
    "knn": "k-NN",
    "logistic_regression": "Logistic regression",
    "adaboost": "AdaBoost",
    "sgd": "SGD",
    "svm": "SVM",
    "ensemble": "Ensemble learning",
}


def resolve_family(name: str) -> str:
    if name in FAMILIES:
        return name
    try:
        return ALIASES[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}") from None


@dataclass(frozen=True)
class AlgorithmSpec:
    """A learner family with hyperparameter overrides and a seed.

    For ``ensemble`` the hyperparameters are ``base_a`` and ``base_b``
    (AlgorithmSpecs) and ``rank``; with no hyperparameters the pair is
    picked by whoever trains the roster.
    """

    family: str
    hyperparameters: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", resolve_family(self.family))
        if self.is_auto_ensemble:
            return
        est = self._estimator()
        est._validate_params()

    @property
    def is_auto_ensemble(self) -> bool:
        """An ensemble whose two bases are chosen later by score."""
        return self.family == "ensemble" and not self.hyperparameters

    def _estimator(self) -> DocClassifier:
        cls = FAMILIES[self.family]
        params = dict(self.hyperparameters)
        if self.family == "ensemble":
            for key in ("base_a", "base_b"):
                base = params.pop(key, None)
                if not isinstance(base, AlgorithmSpec):
                    raise ValueError(f"ensemble needs an AlgorithmSpec for {key!r}")
                params[key.replace("base", "estimator")] = base.build()
        unknown = set(params) - set(cls().get_params(deep=False))
        if unknown:
            raise ValueError(f"unknown {self.family} hyperparameters: {sorted(unknown)}")
        if "random_state" in cls().get_params(deep=False):
            params.setdefault("random_state", self.seed)
        return cls(**params)

    def build(self) -> DocClassifier:
        """A fresh, unfitted estimator."""
        return clone(self._estimator())

    def with_seed(self, seed: int) -> "AlgorithmSpec":
        hp = dict(self.hyperparameters)
        for key in ("base_a", "base_b"):
            if key in hp:
                hp[key] = hp[key].with_seed(seed)
        return replace(self, hyperparameters=hp, seed=seed)

    @property
    def name(self) -> str:
        return self.family

    def to_dict(self) -> dict:
        hp = {
            k: v.to_dict() if isinstance(v, AlgorithmSpec) else v
            for k, v in self.hyperparameters.items()
        }
        return {"family": self.family, "hyperparameters": hp, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict) -> "AlgorithmSpec":
        hp = {
            k: cls.from_dict(v) if k in ("base_a", "base_b") else v
            for k, v in data.get("hyperparameters", {}).items()
        }
        return cls(data["family"], hp, int(data.get("seed", 0)))


def ensemble_spec(base_a: AlgorithmSpec, base_b: AlgorithmSpec, seed: int = 0) -> AlgorithmSpec:
    """Pair two base learners; ``base_a`` is the higher-ranked one."""
    return AlgorithmSpec("ensemble", {"base_a": base_a, "base_b": base_b, "rank": "a"}, seed)


def default_roster(seed: int = 0) -> list[AlgorithmSpec]:
    return [AlgorithmSpec(f, seed=seed) for f in BASE_FAMILIES]


def full_roster(seed: int = 0) -> list[AlgorithmSpec]:
    """The seven base families plus an ensemble of the two best."""
    return default_roster(seed) + [AlgorithmSpec("ensemble", seed=seed)]


__all__ = [
    "ALIASES",
    "AdaBoostClassifier",
    "AlgorithmSpec",
    "BASE_FAMILIES",
    "DISPLAY_NAMES",
    "DecisionTreeClassifier",
    "DocClassifier",
    "FAMILIES",
    "KNeighborsClassifier",
    "LinearSVC",
    "LogisticRegression",
    "MultinomialNB",
    "SGDClassifier",
    "VotingPairClassifier",
    "check_features",
    "default_roster",
    "ensemble_spec",
    "full_roster",
    "logistic_loss_grad",
    "resolve_family",
    "softmax",
]
