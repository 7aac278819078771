"""The two experiment phases, end to end.

Phase one fits one multiclass model per roster algorithm (plus a voting
ensemble of the two best) and evaluates it on the untouched test split.
Phase two trains one binary model per (class, algorithm), selects a winner
per class and combines the winners into a single OvR predictor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import corpus as corpus_mod
from ..corpus import EncodedDataset, LabeledCorpus, SplitSpec, binarize
from ..learners import DISPLAY_NAMES, AlgorithmSpec, default_roster, ensemble_spec
from ..metrics import ClassificationReport, binary_metrics, confusion, report
from ..ovr import OvRCombinedModel, PerClassResult, build_combined, derive_seed, train_class_roster
from ..resampler import ResampleSpec, oversample
from ..textprep import StopwordSet, preprocess
from ..vectorizer import Vocabulary, fit_vocabulary, transform_many

log = logging.getLogger(__name__)

# seed stream slots outside the (class, algorithm, fold) grid
_OVERSAMPLE_STREAM = 10_000
_PHASE_ONE_STREAM = 20_000


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class ExperimentConfig:
    corpus: LabeledCorpus
    stopwords: StopwordSet = field(default_factory=StopwordSet.default)
    split: SplitSpec = field(default_factory=SplitSpec)
    oversample: object = "max"  # "max", an int, or None for no oversampling
    roster: list[AlgorithmSpec] = field(default_factory=default_roster)
    phase: str = "both"
    selection: str = "cv"
    n_folds: int = 5
    seed: int = 0
    min_df: int = 2
    max_features: int | None = None
    theta: float = 0.5
    dedupe: bool = True
    outdir: Path | None = None

    def __post_init__(self):
        if not self.roster:
            raise ValueError("roster is empty")
        if self.phase not in ("one", "two", "both"):
            raise ValueError(f"unknown phase {self.phase!r}")
        if self.selection not in ("cv", "test"):
            raise ValueError(f"unknown selection mode {self.selection!r}")


@dataclass
class Prepared:
    train: EncodedDataset
    test: EncodedDataset
    vocabulary: Vocabulary
    X_train: object
    X_test: object

    @property
    def class_names(self) -> tuple[str, ...]:
        return self.train.class_names


def _stage(name):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except PipelineError:
                raise
            except (ValueError, KeyError) as exc:
                raise PipelineError(name, exc) from exc
        return run
    return wrap


def tokenize_dataset(dataset: EncodedDataset, stops: StopwordSet):
    return [
        preprocess(corpus_mod.Document(doc_id, text), stops)
        for doc_id, text in zip(dataset.doc_ids, dataset.texts)
    ]


def prepare(config: ExperimentConfig) -> Prepared:
    """load -> deduplicate -> encode -> split -> preprocess -> TF-IDF (train only)."""
    corpus = config.corpus
    if config.dedupe:
        corpus = _stage("deduplicate")(corpus_mod.deduplicate)(corpus)
    dataset = _stage("encode")(corpus_mod.encode)(corpus)
    train, test = _stage("split")(corpus_mod.split)(dataset, config.split)
    train_tokens = tokenize_dataset(train, config.stopwords)
    test_tokens = tokenize_dataset(test, config.stopwords)
    vocab = _stage("vectorize")(fit_vocabulary)(
        train_tokens, min_df=config.min_df, max_features=config.max_features
    )
    return Prepared(
        train=train,
        test=test,
        vocabulary=vocab,
        X_train=transform_many(train_tokens, vocab),
        X_test=transform_many(test_tokens, vocab),
    )


def oversampled_training_set(config: ExperimentConfig, prepared: Prepared):
    if config.oversample is None:
        return prepared.X_train, np.asarray(prepared.train.y)
    spec = ResampleSpec(config.oversample, derive_seed(config.seed, _OVERSAMPLE_STREAM))
    return _stage("oversample")(oversample)(prepared.X_train, prepared.train.y, spec)


# -- phase one ---------------------------------------------------------------


@dataclass
class PhaseOneRow:
    spec: AlgorithmSpec
    model: object
    report: ClassificationReport

    @property
    def name(self) -> str:
        return DISPLAY_NAMES[self.spec.family]


@dataclass
class PhaseOneReport:
    rows: list[PhaseOneRow]

    def best(self) -> PhaseOneRow:
        """Highest weighted F1 among the rows (earliest row on ties)."""
        return max(self.rows, key=lambda r: r.report.weighted_f1)


def _evaluate_multiclass(model, prepared: Prepared) -> ClassificationReport:
    K = len(prepared.class_names)
    pred = model.predict(prepared.X_test)
    return report(confusion(prepared.test.y, pred, K, prepared.class_names))


def run_phase_one(config: ExperimentConfig, prepared: Prepared | None = None) -> PhaseOneReport:
    prepared = prepared or prepare(config)
    X, y = oversampled_training_set(config, prepared)
    rows: list[PhaseOneRow] = []
    bases = [s for s in config.roster if not s.is_auto_ensemble]
    for a, spec in enumerate(bases):
        seeded = spec.with_seed(derive_seed(config.seed, _PHASE_ONE_STREAM, a))
        log.info("phase one: fitting %s", spec.family)
        model = _stage(f"fit {spec.family}")(seeded.build().fit)(X, y)
        rows.append(PhaseOneRow(seeded, model, _evaluate_multiclass(model, prepared)))
    plain = [r for r in rows if r.spec.family != "ensemble"]
    if len(plain) >= 2:
        ranked = sorted(
            range(len(plain)), key=lambda i: (-plain[i].report.weighted_f1, i)
        )
        first, second = plain[ranked[0]].spec, plain[ranked[1]].spec
        spec = ensemble_spec(first, second, derive_seed(config.seed, _PHASE_ONE_STREAM, len(bases)))
        model = spec.build().fit(X, y)
        rows.append(PhaseOneRow(spec, model, _evaluate_multiclass(model, prepared)))
    return PhaseOneReport(rows)


# -- phase two ---------------------------------------------------------------


@dataclass
class GridCell:
    accuracy: float
    precision: float
    recall: float
    f1: float
    selection_f1: float


@dataclass
class PhaseTwoReport:
    class_names: tuple[str, ...]
    algorithms: list[AlgorithmSpec]
    grid: dict[tuple[int, int], GridCell]  # (algorithm index, class index)
    winners: list[int]
    results: list[PerClassResult]
    combined_report: ClassificationReport

    def winner_f1(self, c: int) -> float:
        """Test F1 of the selected algorithm for class ``c``."""
        return self.grid[(self.winners[c], c)].f1

    def best_test_f1(self, c: int) -> float:
        return max(self.grid[(a, c)].f1 for a in range(len(self.algorithms)))


def phase_two_roster(config: ExperimentConfig) -> list[AlgorithmSpec]:
    return list(config.roster)


def run_phase_two(config: ExperimentConfig, prepared: Prepared | None = None):
    """Returns ``(PhaseTwoReport, OvRCombinedModel)``."""
    prepared = prepared or prepare(config)
    K = len(prepared.class_names)
    roster = phase_two_roster(config)
    heldout = (prepared.X_test, prepared.test.y) if config.selection == "test" else None
    results, grid = [], {}
    for c in range(K):
        log.info("phase two: class %s", prepared.class_names[c])
        result = _stage(f"select class {prepared.class_names[c]}")(train_class_roster)(
            c,
            roster,
            prepared.X_train,
            prepared.train.y,
            selection="heldout" if heldout else "cv",
            n_folds=config.n_folds,
            heldout=heldout,
            resample=config.oversample,
            seed=config.seed,
            n_classes=K,
        )
        yb_test = binarize(prepared.test.y, c, K)
        for a, cand in enumerate(result.candidates):
            acc, m = binary_metrics(yb_test, cand.model.predict(prepared.X_test))
            grid[(a, c)] = GridCell(acc, m.precision, m.recall, m.f1, cand.selection_f1)
        results.append(result)
    combined = build_combined(results, prepared.class_names, config.theta, prepared.vocabulary)
    pred = combined.predict(prepared.X_test)
    combined_report = report(confusion(prepared.test.y, pred, K, prepared.class_names))
    algorithms = [cand.spec for cand in results[0].candidates]
    rep = PhaseTwoReport(
        class_names=prepared.class_names,
        algorithms=algorithms,
        grid=grid,
        winners=[r.winner for r in results],
        results=results,
        combined_report=combined_report,
    )
    return rep, combined


# -- term profiles -----------------------------------------------------------


def term_profile(
    corpus,
    class_name: str,
    n: int = 25,
    stops: StopwordSet | None = None,
    min_df: int = 1,
) -> list[tuple[str, float]]:
    """Top ``n`` terms of a class by summed TF-IDF weight over its documents.

    The vocabulary is fit on the whole corpus given. Ties are broken
    lexicographically; ``n`` beyond the vocabulary size returns everything.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dataset = corpus if isinstance(corpus, EncodedDataset) else corpus_mod.encode(corpus)
    c = dataset.encode(class_name)
    stops = stops if stops is not None else StopwordSet.default()
    tokens = tokenize_dataset(dataset, stops)
    vocab = fit_vocabulary(tokens, min_df=min_df)
    X = transform_many([t for t, y in zip(tokens, dataset.y) if y == c], vocab)
    totals = np.asarray(X.sum(axis=0)).ravel()
    ranked = sorted(
        ((vocab.terms[j], float(totals[j])) for j in np.flatnonzero(totals > 0)),
        key=lambda item: (-item[1], item[0]),
    )
    return ranked[:n]
