"""Command line: ingest, train, evaluate, compare, predict, profile, synth.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import gzip
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from .. import corpus as corpus_mod
from ..corpus import CorpusError, LabeledCorpus, SplitSpec
from ..learners import ALIASES, AlgorithmSpec, full_roster, resolve_family
from ..metrics import confusion, report
from ..textprep import StopwordSet, preprocess
from ..vectorizer import EmptyVocabularyError, transform_many
from . import persistence, reports
from .experiment import (
    ExperimentConfig,
    PipelineError,
    prepare,
    run_phase_one,
    run_phase_two,
    term_profile,
    tokenize_dataset,
)
from .synthetic import acceptance_spec, make_corpus

log = logging.getLogger("docclf")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
DATASET_FORMAT = "docclf-dataset"
DATASET_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- dataset files -----------------------------------------------------------


def write_dataset(corpus: LabeledCorpus, path, deduplicated: bool) -> None:
    payload = {
        "format": DATASET_FORMAT,
        "version": DATASET_VERSION,
        "deduplicated": deduplicated,
        "class_names": list(corpus.class_names),
        "records": [
            {"id": d.id, "text": d.text, "label": lab}
            for d, lab in zip(corpus.documents, corpus.labels)
        ],
    }
    # no name and a fixed mtime in the header keep the bytes reproducible
    with open(path, "wb") as raw, gzip.GzipFile("", "wb", fileobj=raw, mtime=0) as fh:
        fh.write(json.dumps(payload, sort_keys=True).encode("utf-8"))


def read_dataset(path) -> LabeledCorpus:
    try:
        with gzip.open(path, "rb") as fh:
            payload = json.loads(fh.read().decode("utf-8"))
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorpusError(f"{path}: not a dataset file ({exc})") from None
    if payload.get("format") != DATASET_FORMAT:
        raise CorpusError(f"{path}: not a {DATASET_FORMAT} file")
    if payload.get("version") != DATASET_VERSION:
        raise CorpusError(
            f"{path}: dataset version {payload.get('version')} is not {DATASET_VERSION}"
        )
    records = [(r["id"], r["text"], r["label"]) for r in payload["records"]]
    corpus = LabeledCorpus.from_records(records)
    return LabeledCorpus(corpus.documents, corpus.labels, tuple(payload["class_names"]))


# -- argument helpers --------------------------------------------------------


def _oversample_arg(value: str):
    if value == "off":
        return None
    if value == "max":
        return "max"
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected max, off or a positive integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("oversampling target must be >= 1")
    return n


def _roster(algo: str, seed: int) -> list[AlgorithmSpec]:
    if algo == "all":
        return full_roster(seed)
    family = resolve_family(algo)
    if family == "ensemble":
        return full_roster(seed)
    return [AlgorithmSpec(family, seed=seed)]


def _stopwords(path) -> StopwordSet:
    return StopwordSet.with_domain_file(path) if path else StopwordSet.default()


def _config(args, corpus, roster) -> ExperimentConfig:
    return ExperimentConfig(
        corpus=corpus,
        stopwords=_stopwords(getattr(args, "stopwords", None)),
        split=SplitSpec(args.train_fraction, args.seed),
        oversample=args.oversample,
        roster=roster,
        phase=getattr(args, "phase", "both"),
        selection=getattr(args, "select_on", "cv"),
        seed=args.seed,
        min_df=args.min_df,
        max_features=args.max_features,
        theta=getattr(args, "theta", 0.5),
        dedupe=False,
    )


def _pipeline_meta(config: ExperimentConfig, mode: str) -> dict:
    return {
        "mode": mode,
        "class_names": None,
        "split": {
            "train_fraction": config.split.train_fraction,
            "seed": config.split.seed,
            "stratified": config.split.stratified,
        },
        "stopwords": {
            "standard": sorted(config.stopwords.standard),
            "domain": sorted(config.stopwords.domain),
        },
        "min_df": config.min_df,
        "max_features": config.max_features,
        "oversample": config.oversample,
        "seed": config.seed,
    }


def _meta_stopwords(meta) -> StopwordSet:
    sw = meta.get("stopwords")
    if not sw:
        return StopwordSet.default()
    return StopwordSet(frozenset(sw["standard"]), frozenset(sw["domain"]))


# -- commands ----------------------------------------------------------------


def cmd_ingest(args) -> int:
    corpus = corpus_mod.load_jsonl(args.input)
    n_in = len(corpus)
    if args.dedupe:
        corpus = corpus_mod.deduplicate(corpus)
    empty = corpus.empty_documents()
    if empty:
        log.warning("%d documents have empty text, e.g. %s", len(empty), empty[:3])
    write_dataset(corpus, args.out, args.dedupe)
    print(f"{n_in} records read, {len(corpus)} kept, {len(corpus.class_names)} classes")
    return EXIT_OK


def cmd_train(args) -> int:
    corpus = read_dataset(args.input)
    roster = _roster(args.algo, args.seed)
    config = _config(args, corpus, roster)
    prepared = prepare(config)
    meta = _pipeline_meta(config, args.mode)
    meta["class_names"] = list(prepared.class_names)
    if args.mode == "ovr":
        rep, combined = run_phase_two(config, prepared)
        bundle = persistence.Bundle(combined, prepared.vocabulary, meta)
        for c, name in enumerate(rep.class_names):
            cand = rep.results[c].best
            print(f"{name}\t{cand.spec.family}\tselection_f1={cand.selection_f1:.4f}")
    else:
        rep = run_phase_one(config, prepared)
        if args.algo == "all":
            row = rep.best()
        elif resolve_family(args.algo) == "ensemble":
            row = rep.rows[-1]
        else:
            row = rep.rows[0]
        meta["algorithm"] = row.spec.to_dict()
        bundle = persistence.Bundle(row.model, prepared.vocabulary, meta)
        print(f"{row.spec.family}\ttest weighted F1={row.report.weighted_f1:.4f}")
    persistence.save(bundle, args.out)
    return EXIT_OK


def _rebuild_split(bundle, corpus, which: str):
    meta = bundle.meta
    dataset = corpus_mod.encode(corpus)
    names = meta.get("class_names") or list(bundle.model.class_names)
    if list(dataset.class_names) != list(names):
        raise CorpusError("dataset classes do not match the model's classes")
    if which == "all":
        return dataset
    s = meta.get("split", {})
    spec = SplitSpec(s.get("train_fraction", 0.7), s.get("seed", 0), s.get("stratified", True))
    train, test = corpus_mod.split(dataset, spec)
    return train if which == "train" else test


def cmd_evaluate(args) -> int:
    bundle = persistence.load_bundle(args.model)
    if bundle.vocabulary is None:
        raise CorpusError("model container carries no vocabulary")
    dataset = _rebuild_split(bundle, read_dataset(args.input), args.split)
    tokens = tokenize_dataset(dataset, _meta_stopwords(bundle.meta))
    X = transform_many(tokens, bundle.vocabulary)
    pred = bundle.model.predict(X)
    rep = report(confusion(dataset.y, pred, dataset.n_classes, dataset.class_names))
    if args.report:
        Path(args.report).write_text(rep.to_csv(), encoding="utf-8")
    sys.stdout.write(rep.to_markdown())
    return EXIT_OK


def cmd_compare(args) -> int:
    corpus = read_dataset(args.input)
    roster = _roster(args.algo, args.seed)
    config = _config(args, corpus, roster)
    prepared = prepare(config)
    Path(args.outdir).mkdir(parents=True, exist_ok=True)
    one = two = None
    if args.phase in ("one", "both"):
        one = run_phase_one(config, prepared)
    if args.phase in ("two", "both"):
        two, combined = run_phase_two(config, prepared)
        meta = _pipeline_meta(config, "ovr")
        meta["class_names"] = list(prepared.class_names)
        persistence.save(
            persistence.Bundle(combined, prepared.vocabulary, meta),
            Path(args.outdir) / "ovr_model.json",
        )
    for path in reports.write_reports(args.outdir, one, two):
        print(path)
    return EXIT_OK


def cmd_predict(args) -> int:
    bundle = persistence.load_bundle(args.model)
    if bundle.vocabulary is None:
        raise CorpusError("model container carries no vocabulary")
    text = Path(args.text_file).read_text(encoding="utf-8")
    doc = preprocess(corpus_mod.Document("input", text), _meta_stopwords(bundle.meta))
    X = transform_many([doc], bundle.vocabulary)
    names = bundle.meta.get("class_names") or []
    if bundle.kind == "ovr":
        model = bundle.model
        names = list(model.class_names)
        theta = args.theta if args.theta is not None else model.theta
        scores = model.scores(X)[0]
    else:
        proba = bundle.model.predict_proba(X)[0]
        scores = np.zeros(len(names))
        scores[np.asarray(bundle.model.classes_, dtype=np.int64)] = proba
        theta = args.theta if args.theta is not None else 0.5
    if args.multilabel:
        hits = sorted(
            ((int(c), float(scores[c])) for c in np.flatnonzero(scores >= theta)),
            key=lambda h: (-h[1], h[0]),
        )
        out = [{"label": names[c], "score": s} for c, s in hits]
    else:
        best = int(np.argmax(scores))
        out = {"label": names[best], "score": float(scores[best])}
    print(json.dumps(out))
    return EXIT_OK


def cmd_profile(args) -> int:
    corpus = read_dataset(args.input)
    if args.class_name not in corpus.class_names:
        raise CorpusError(f"unknown class {args.class_name!r}")
    profile = term_profile(
        corpus, args.class_name, args.top, _stopwords(args.stopwords), min_df=args.min_df
    )
    for term, weight in profile:
        print(f"{term}\t{weight:.6f}")
    return EXIT_OK


def cmd_synth(args) -> int:
    corpus = make_corpus(acceptance_spec(args.seed))
    corpus_mod.write_jsonl(corpus, args.out)
    print(f"{len(corpus)} documents, {len(corpus.class_names)} classes -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="docclf", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    algos = sorted(set(ALIASES)) + ["all"]

    def pipeline_opts(p, with_algo=True):
        p.add_argument("--input", required=True, help="dataset file from `ingest`")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--oversample", type=_oversample_arg, default="max",
                       help="max, off, or a per-class target count")
        p.add_argument("--stopwords", help="domain stopword file")
        p.add_argument("--min-df", type=int, default=2)
        p.add_argument("--max-features", type=int)
        p.add_argument("--train-fraction", type=float, default=0.7)
        if with_algo:
            p.add_argument("--algo", choices=algos, default="all")

    p = sub.add_parser("ingest", help="read a JSONL corpus into a dataset file")
    p.add_argument("--input", required=True)
    p.add_argument("--dedupe", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="train a multiclass or OvR model")
    pipeline_opts(p)
    p.add_argument("--mode", choices=["multiclass", "ovr"], default="multiclass")
    p.add_argument("--select-on", choices=["cv", "test"], default="cv")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="classification report for a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--split", choices=["test", "train", "all"], default="test")
    p.add_argument("--report", help="CSV output path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="run phase one and/or phase two")
    pipeline_opts(p)
    p.add_argument("--phase", choices=["one", "two", "both"], default="both")
    p.add_argument("--select-on", choices=["cv", "test"], default="cv")
    p.add_argument("--theta", type=float, default=0.5)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("predict", help="classify one text file")
    p.add_argument("--model", required=True)
    p.add_argument("--text-file", required=True)
    p.add_argument("--multilabel", action="store_true")
    p.add_argument("--theta", type=float)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("profile", help="top TF-IDF terms of a class")
    p.add_argument("--input", required=True)
    p.add_argument("--class", dest="class_name", required=True)
    p.add_argument("--top", type=int, default=25)
    p.add_argument("--stopwords")
    p.add_argument("--min-df", type=int, default=1)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("synth", help="write the synthetic 12-class demo corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if not args.verbose:
        warnings.simplefilter("ignore")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"docclf: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusError, PipelineError, EmptyVocabularyError, persistence.ContainerError,
            FileNotFoundError, IsADirectoryError, ValueError) as exc:
        print(f"docclf: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"docclf: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
