import numpy as np
import pytest

from docclf.corpus import LabeledCorpus, SplitSpec
from docclf.harness import experiment, reports
from docclf.harness.experiment import (
    ExperimentConfig,
    PipelineError,
    prepare,
    run_phase_one,
    run_phase_two,
    term_profile,
)
from docclf.harness.synthetic import SyntheticSpec, make_corpus
from docclf.learners import AlgorithmSpec, default_roster, full_roster

pytestmark = pytest.mark.filterwarnings("ignore")


def _config(corpus, **kw):
    kw.setdefault("roster", default_roster())
    return ExperimentConfig(corpus=corpus, **kw)


def test_separable_corpus_every_algorithm_scores_high():
    corpus = make_corpus(SyntheticSpec(
        class_names=("alpha", "beta", "gamma"), class_sizes=(40, 30, 20),
        keywords_per_class=15, noise_pool_size=40, doc_length=(15, 30),
        noise_fraction=0.4, bleed=0.0, seed=3,
        seed_keywords={"alpha": ("loan",), "beta": ("school",), "gamma": ("clinic",)},
    ))
    cfg = _config(corpus)
    rep = run_phase_one(cfg)
    assert [r.spec.family for r in rep.rows][-1] == "ensemble"
    for row in rep.rows:
        assert row.report.weighted_f1 >= 0.9, row.spec.family


def test_roster_of_one_has_one_row(small_corpus):
    rep = run_phase_one(_config(small_corpus, roster=[AlgorithmSpec("naive_bayes")]))
    assert len(rep.rows) == 1


def test_phase_one_csv_is_deterministic(small_corpus):
    roster = [AlgorithmSpec("naive_bayes"), AlgorithmSpec("sgd"), AlgorithmSpec("knn")]
    a = reports.phase_one_csv(run_phase_one(_config(small_corpus, roster=roster, seed=7)))
    b = reports.phase_one_csv(run_phase_one(_config(small_corpus, roster=roster, seed=7)))
    assert a == b


def test_test_split_never_reaches_fitting(small_corpus, monkeypatch):
    cfg = _config(small_corpus, roster=[AlgorithmSpec("naive_bayes"), AlgorithmSpec("svm")])
    prepared = prepare(cfg)
    test_ids = set(prepared.test.doc_ids)
    seen_vocab_docs, seen_rows = [], []

    real_fit_vocabulary = experiment.fit_vocabulary
    real_oversample = experiment.oversample

    def spy_vocab(docs, **kw):
        docs = list(docs)
        seen_vocab_docs.extend(d.doc_id for d in docs)
        return real_fit_vocabulary(docs, **kw)

    def spy_oversample(X, y, spec):
        seen_rows.append(X.shape[0])
        return real_oversample(X, y, spec)

    monkeypatch.setattr(experiment, "fit_vocabulary", spy_vocab)
    monkeypatch.setattr(experiment, "oversample", spy_oversample)
    prepared = prepare(cfg)
    assert seen_vocab_docs and test_ids.isdisjoint(seen_vocab_docs)
    run_phase_one(cfg, prepared)
    assert seen_rows == [len(prepared.train)]


def test_phase_two_overlap_class_is_hardest():
    names = ("apple", "berry", "cocoa", "dates")
    corpus = make_corpus(SyntheticSpec(
        class_names=names, class_sizes=(40, 40, 40, 40), keywords_per_class=15,
        noise_pool_size=40, doc_length=(15, 30), noise_fraction=0.6, bleed=0.0,
        overlap_classes=("cocoa",), overlap_fraction=0.9, seed=5,
    ))
    roster = [AlgorithmSpec("naive_bayes"), AlgorithmSpec("logistic_regression")]
    rep, combined = run_phase_two(_config(corpus, roster=roster, selection="test"))
    best = [rep.best_test_f1(c) for c in range(4)]
    assert int(np.argmin(best)) == rep.class_names.index("cocoa")
    # under test selection the winner is a grid maximum
    for c in range(4):
        assert rep.winner_f1(c) == best[c]
    assert combined.class_names == rep.class_names


def test_stage_errors_name_the_stage():
    corpus = LabeledCorpus.from_records([("a", "the of and", "A"), ("b", "and the", "B"),
                                         ("c", "of", "A"), ("d", "the", "B")])
    with pytest.raises(PipelineError, match="vectorize"):
        prepare(_config(corpus, split=SplitSpec(0.5, 0)))


def test_config_validation(small_corpus):
    with pytest.raises(ValueError):
        _config(small_corpus, roster=[])
    with pytest.raises(ValueError):
        _config(small_corpus, selection="magic")


def test_term_profile_examples():
    corpus = make_corpus(SyntheticSpec(
        class_names=("kids", "money"), class_sizes=(15, 15), keywords_per_class=8,
        noise_pool_size=10, noise_fraction=0.2,
        seed_keywords={"kids": ("child",), "money": ("wallet",)}, seed=1,
    ))
    top = [t for t, _ in term_profile(corpus, "kids", 3)]
    assert "child" in top
    everything = term_profile(corpus, "kids", 10_000)
    assert len(everything) < 10_000
    weights = [w for _, w in everything]
    assert weights == sorted(weights, reverse=True)
    with pytest.raises(ValueError, match="unknown class"):
        term_profile(corpus, "nope", 3)


def test_term_profile_disjoint_classes():
    corpus = LabeledCorpus.from_records([
        ("1", "alpha beta", "A"), ("2", "beta gamma", "A"),
        ("3", "delta epsilon", "B"), ("4", "zeta delta", "B"),
    ])
    a = {t for t, _ in term_profile(corpus, "A", 10)}
    b = {t for t, _ in term_profile(corpus, "B", 10)}
    assert a and b and a.isdisjoint(b)


def test_reports_written(small_corpus, tmp_path):
    roster = [AlgorithmSpec("naive_bayes"), AlgorithmSpec("knn")]
    cfg = _config(small_corpus, roster=roster, selection="test")
    prepared = prepare(cfg)
    one = run_phase_one(cfg, prepared)
    two, _ = run_phase_two(cfg, prepared)
    paths = reports.write_reports(tmp_path, one, two)
    names = {p.name for p in paths}
    assert {"phase_one.csv", "phase_two.csv", "phase_two.md"} <= names
    md = (tmp_path / "phase_two.md").read_text()
    assert md.count("**") >= 2 * len(small_corpus.class_names)
    assert (tmp_path / "phase_one.md").read_text().count("**") == 2
