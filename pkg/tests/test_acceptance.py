"""Acceptance criteria 1-9.

Each test prints one ``PASS``/``FAIL`` line for its criterion (visible with
``pytest -s`` or in the terminal summary) and then asserts it. Run the file
directly with ``python tests/test_acceptance.py`` for the lines alone.
"""

import math
import time
import warnings
from collections import Counter

import numpy as np
import pytest
import scipy.sparse as sp

from docclf.corpus import Document, LabeledCorpus, write_jsonl
from docclf.harness import persistence
from docclf.harness.cli import main as cli_main
from docclf.harness.experiment import ExperimentConfig, prepare, run_phase_one, run_phase_two
from docclf.harness.synthetic import acceptance_spec, make_corpus
from docclf.learners import BASE_FAMILIES, AlgorithmSpec, ensemble_spec, full_roster
from docclf.learners.linear import logistic_loss_grad
from docclf.metrics import confusion, f1_from_pr, report
from docclf.ovr import OvRSelectionClassifier
from docclf.resampler import ResampleSpec, oversample
from docclf.textprep import StopwordSet, preprocess
from docclf.vectorizer import fit_vocabulary, transform, transform_many

OVERLAP = ("Data Systems & development", "Digital Inclusion")
RESULTS = {}


def verdict(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


# -- 1 -----------------------------------------------------------------------


def _oracle(y_true, y_pred, K):
    cm = [[0] * K for _ in range(K)]
    for t, p in zip(y_true, y_pred):
        cm[t][p] += 1
    n = len(y_true)
    per = []
    for c in range(K):
        tp = cm[c][c]
        fp = sum(cm[r][c] for r in range(K)) - tp
        fn = sum(cm[c]) - tp
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * tp / (2 * tp + fp + fn) if tp + fp + fn else 0.0
        per.append((prec, rec, f1, tp + fn))
    acc = sum(cm[c][c] for c in range(K)) / n
    return cm, acc, per, sum(f * s for _, _, f, s in per) / n


def test_criterion_1_metrics_oracle():
    rng = np.random.default_rng(1)
    K = 12
    start = time.perf_counter()
    worst = 0.0
    cm_ok = True
    for _ in range(500):
        n = int(rng.integers(1, 200))
        yt = rng.integers(0, K, n).tolist()
        yp = rng.integers(0, K, n).tolist()
        cm_b, acc_b, per_b, wf1_b = _oracle(yt, yp, K)
        cm = confusion(yt, yp, K)
        r = report(cm)
        cm_ok &= cm.counts.tolist() == cm_b
        diffs = [abs(r.accuracy - acc_b), abs(r.weighted_f1 - wf1_b)]
        for m, (p, rc, f, s) in zip(r.per_class, per_b):
            diffs += [abs(m.precision - p), abs(m.recall - rc), abs(m.f1 - f), abs(m.support - s)]
        worst = max(worst, max(diffs))
    elapsed = time.perf_counter() - start
    verdict(1, cm_ok and worst <= 1e-12 and elapsed < 5.0,
            f"500 random pairs, max deviation {worst:.1e}, {elapsed:.2f}s")


# -- 2 -----------------------------------------------------------------------


def test_criterion_2_f1_spot_checks():
    cases = [((1.00, 0.64), "0.78"), ((0.60, 0.75), "0.67"), ((0.0, 0.0), "0.00")]
    got = [f"{f1_from_pr(p, r):.2f}" for (p, r), _ in cases]
    verdict(2, got == [want for _, want in cases], f"F1 values {got}")


# -- 3 -----------------------------------------------------------------------


def test_criterion_3_tfidf_hand_oracle():
    docs = [["apple", "banana"], ["apple"], ["cherry"]]
    vocab = fit_vocabulary(docs, min_df=1)
    X = transform_many(docs, vocab).toarray()
    # hand computation: idf = ln(4 / (1 + df)) + 1, then unit rows
    idf = {"apple": math.log(4 / 3) + 1, "banana": math.log(4 / 2) + 1,
           "cherry": math.log(4 / 2) + 1}
    expected = np.zeros((3, 3))
    for i, doc in enumerate(docs):
        for t in doc:
            expected[i, vocab.index(t)] = idf[t]
        expected[i] /= math.sqrt(sum(v * v for v in expected[i]))
    err = float(np.abs(X - expected).max())
    row = transform(docs[0], vocab).toarray().ravel()
    verdict(3, err < 1e-9,
            f"max error {err:.1e}; apple {row[0]:.6f}, banana {row[1]:.6f}")


# -- 4 -----------------------------------------------------------------------


def test_criterion_4_logistic_gradient():
    rng = np.random.default_rng(4)
    worst = 0.0
    h = 1e-6
    for point in range(20):
        K = 2 if point % 2 == 0 else 4
        n, d = 25, 7
        X = sp.random(n, d, density=0.5, format="csr", random_state=rng)
        y = rng.integers(0, K, n)
        rows = 1 if K == 2 else K
        W = rng.normal(size=(rows, d))
        b = rng.normal(size=rows)
        alpha = 0.01
        _, gW, gb = logistic_loss_grad(W, b, X, y, alpha)
        params = np.concatenate([W.ravel(), b])

        def loss(theta):
            return logistic_loss_grad(theta[: rows * d].reshape(rows, d), theta[rows * d:],
                                      X, y, alpha)[0]

        fd = np.empty_like(params)
        for i in range(len(params)):
            e = np.zeros_like(params)
            e[i] = h
            fd[i] = (loss(params + e) - loss(params - e)) / (2 * h)
        ana = np.concatenate([gW.ravel(), gb])
        rel = np.abs(ana - fd) / np.maximum(np.maximum(np.abs(ana), np.abs(fd)), 1e-8)
        worst = max(worst, float(rel.max()))
    verdict(4, worst < 1e-5, f"20 random points, max relative error {worst:.2e}")


# -- 5 -----------------------------------------------------------------------


def test_criterion_5_oversampling_invariants():
    rng = np.random.default_rng(5)
    failures = []
    for trial in range(50):
        K = int(rng.integers(2, 7))
        counts = rng.integers(1, 40, K)
        y = np.repeat(np.arange(K), counts)
        X = sp.csr_matrix(rng.random((len(y), 3)))
        seed = int(rng.integers(0, 2**31))
        Xr, yr = oversample(X, y, ResampleSpec("max", seed))
        dense, dense_r = X.toarray(), Xr.toarray()
        balanced = set(Counter(yr.tolist()).values()) == {int(counts.max())}
        originals = np.array_equal(dense_r[: len(y)], dense) and np.array_equal(yr[: len(y)], y)
        originals = originals and {tuple(r) for r in dense} <= {tuple(r) for r in dense_r}
        Xr2, yr2 = oversample(X, y, ResampleSpec("max", seed))
        repeat = (Xr2 != Xr).nnz == 0 and np.array_equal(yr2, yr)
        if not (balanced and originals and repeat):
            failures.append(trial)
    verdict(5, not failures, f"50 imbalanced datasets, failures {failures}")


# -- 6 -----------------------------------------------------------------------


@pytest.fixture(scope="module")
def synthetic_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("acceptance")
    src = root / "synthetic.jsonl"
    write_jsonl(make_corpus(acceptance_spec(0)), src)
    out = root / "dataset.bin"
    assert cli_main(["ingest", "--input", str(src), "--dedupe", "--out", str(out)]) == 0
    return out


def test_criterion_6_determinism(synthetic_dataset, tmp_path):
    digests = []
    for run in ("a", "b"):
        outdir = tmp_path / run
        code = cli_main(["compare", "--input", str(synthetic_dataset), "--phase", "both",
                         "--seed", "0", "--outdir", str(outdir)])
        assert code == 0
        digests.append({p.name: p.read_bytes() for p in sorted(outdir.glob("*.csv"))})
    same = digests[0] == digests[1] and len(digests[0]) >= 4
    verdict(6, same, f"{len(digests[0])} CSV reports byte-identical across two runs: {same}")


# -- 7 -----------------------------------------------------------------------


def test_criterion_7_central_finding():
    start = time.perf_counter()
    corpus = make_corpus(acceptance_spec(0))
    sizes = Counter(corpus.labels)
    cfg = ExperimentConfig(corpus=corpus, roster=full_roster(0), selection="test", seed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prepared = prepare(cfg)
        one = run_phase_one(cfg, prepared)
        two, _ = run_phase_two(cfg, prepared)
    elapsed = time.perf_counter() - start

    best_one = one.best().report.weighted_f1
    combined = two.combined_report.weighted_f1
    ok_a = combined >= best_one - 0.02

    per_class = [two.winner_f1(c) for c in range(len(two.class_names))]
    order = sorted(range(len(per_class)), key=lambda c: per_class[c])
    bottom3 = {two.class_names[c] for c in order[:3]}
    # ties with the third-lowest value count as bottom three
    third = per_class[order[2]]
    ok_b = all(per_class[two.class_names.index(name)] <= third for name in OVERLAP)

    families = {two.algorithms[w].family for w in two.winners}
    ok_c = len(families) >= 2

    ok_scale = min(sizes.values()) == 13 and max(sizes.values()) == 149 and len(sizes) == 12
    ok = ok_a and ok_b and ok_c and ok_scale and elapsed < 600
    verdict(7, ok,
            f"(a) combined {combined:.3f} vs phase-one best {best_one:.3f} - 0.02: {ok_a}; "
            f"(b) bottom three {sorted(bottom3)}: {ok_b}; "
            f"(c) winning families {sorted(families)}: {ok_c}; {elapsed:.0f}s")


# -- 8 -----------------------------------------------------------------------


def test_criterion_8_degenerate_inputs(tmp_path):
    problems = []
    stops = StopwordSet.default()
    rng = np.random.default_rng(8)
    X = sp.csr_matrix(rng.random((6, 4)))

    # single-class training for every family
    for spec in [AlgorithmSpec(f) for f in BASE_FAMILIES] + [
        ensemble_spec(AlgorithmSpec("naive_bayes"), AlgorithmSpec("knn"))
    ]:
        model = spec.build().fit(X, np.full(6, 2))
        P = model.predict_proba(X)
        if model.predict(X).tolist() != [2] * 6 or not np.array_equal(P, np.ones((6, 1))):
            problems.append(f"single-class {spec.family}")

    # all-stopword and empty documents preprocess to nothing and give zero rows
    vocab = fit_vocabulary([["loan", "farmer"], ["loan"]], min_df=1)
    for text in ("the of and with", "", "2021 -- !!"):
        doc = preprocess(Document("d", text), stops)
        if doc.tokens or transform(doc, vocab).nnz:
            problems.append(f"degenerate text {text!r}")

    # a corpus containing such documents still runs through both phases
    records = [(f"a{i}", f"loan farmer credit {i}", "A") for i in range(8)]
    records += [(f"b{i}", f"school teacher pupil {i}", "B") for i in range(8)]
    records += [("e1", "", "A"), ("e2", "the and of", "B"), ("e3", "", "B")]
    corpus = LabeledCorpus.from_records(records)
    roster = [AlgorithmSpec("naive_bayes"), AlgorithmSpec("knn"), AlgorithmSpec("adaboost")]
    cfg = ExperimentConfig(corpus=corpus, roster=roster, n_folds=3, min_df=1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        prepared = prepare(cfg)
        one = run_phase_one(cfg, prepared)
        two, combined = run_phase_two(cfg, prepared)
    if len(one.rows) != 4 or len(combined.entries) != 2:
        problems.append("pipeline on corpus with empty documents")

    # OOV-only prediction input
    oov = preprocess(Document("q", "zebra quantum"), stops)
    x = transform(oov, prepared.vocabulary)
    if x.nnz:
        problems.append("OOV document produced features")
    for row in one.rows:
        P = row.model.predict_proba(x)
        if not (np.all(np.isfinite(P)) and abs(P.sum() - 1) < 1e-12):
            problems.append(f"OOV proba {row.spec.family}")
    label, score = combined.predict_single(x)
    multi = combined.predict_multilabel(x)[0]
    if not (0 <= label[0] < 2 and 0.0 <= score[0] <= 1.0):
        problems.append("OOV combined prediction")
    if multi and multi[0][0] != label[0]:
        problems.append("OOV multilabel ordering")
    verdict(8, not problems, f"degenerate-input suite, problems {problems}")


# -- 9 -----------------------------------------------------------------------


def test_criterion_9_persistence(tmp_path):
    rng = np.random.default_rng(9)
    n_features = 20
    X = sp.random(80, n_features, density=0.3, format="csr", random_state=rng)
    y = rng.integers(0, 4, 80)
    Q = sp.random(100, n_features, density=0.3, format="csr", random_state=rng)
    mismatched = []
    specs = [AlgorithmSpec(f, seed=3) for f in BASE_FAMILIES] + [
        ensemble_spec(AlgorithmSpec("sgd"), AlgorithmSpec("naive_bayes"))
    ]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for spec in specs:
            model = spec.build().fit(X, y)
            path = tmp_path / f"{spec.family}.json"
            persistence.save(model, path)
            back = persistence.load(path)
            if not (np.array_equal(model.predict(Q), back.predict(Q))
                    and np.array_equal(model.predict_proba(Q), back.predict_proba(Q))):
                mismatched.append(spec.family)
        roster = [AlgorithmSpec("naive_bayes"), AlgorithmSpec("svm"), AlgorithmSpec("knn")]
        est = OvRSelectionClassifier(roster=roster + [AlgorithmSpec("ensemble")], n_folds=3)
        est.fit(X, y)
    path = tmp_path / "ovr.json"
    persistence.save(est.combined_, path)
    back = persistence.load(path)
    if not (np.array_equal(est.combined_.predict(Q), back.predict(Q))
            and est.combined_.predict_multilabel(Q) == back.predict_multilabel(Q)):
        mismatched.append("ovr")
    verdict(9, not mismatched,
            f"{len(specs)} families + OvR over 100 inputs, mismatches {mismatched}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
