"""Labeled corpus ingestion, deduplication, label encoding and splitting."""

from __future__ import annotations

import json
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np


class CorpusError(ValueError):
    """Raised for malformed or inconsistent corpus input."""


@dataclass(frozen=True)
class Document:
    id: str
    text: str


@dataclass(frozen=True)
class LabeledCorpus:
    documents: tuple[Document, ...]
    labels: tuple[str, ...]
    class_names: tuple[str, ...]

    def __post_init__(self):
        if len(self.documents) != len(self.labels):
            raise CorpusError("documents and labels differ in length")
        unknown = set(self.labels) - set(self.class_names)
        if unknown:
            raise CorpusError(f"labels not in class_names: {sorted(unknown)}")

    def __len__(self):
        return len(self.documents)

    @classmethod
    def from_records(cls, records) -> "LabeledCorpus":
        """Build from ``(id, text, label)`` triples, classes in first-seen order."""
        docs, labels, seen = [], [], {}
        for doc_id, text, label in records:
            docs.append(Document(doc_id, text))
            labels.append(label)
            seen.setdefault(label, None)
        return cls(tuple(docs), tuple(labels), tuple(seen))

    def empty_documents(self) -> list[str]:
        return [d.id for d in self.documents if not d.text.strip()]


@dataclass(frozen=True)
class EncodedDataset:
    """Documents with integer class indices under a fixed label map."""

    doc_ids: tuple[str, ...]
    y: np.ndarray
    class_names: tuple[str, ...]
    texts: tuple[str, ...] = field(default=(), repr=False)

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.int64)
        y.setflags(write=False)
        object.__setattr__(self, "y", y)
        if len(self.doc_ids) != len(y):
            raise CorpusError("doc_ids and y differ in length")
        if self.texts and len(self.texts) != len(y):
            raise CorpusError("texts and y differ in length")
        if len(y) and (y.min() < 0 or y.max() >= len(self.class_names)):
            raise CorpusError("class index out of range")

    def __len__(self):
        return len(self.doc_ids)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @property
    def label_map(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.class_names)}

    def encode(self, name: str) -> int:
        try:
            return self.label_map[name]
        except KeyError:
            raise CorpusError(f"unknown class {name!r}") from None

    def decode(self, index: int) -> str:
        return self.class_names[index]

    def subset(self, rows) -> "EncodedDataset":
        rows = np.asarray(rows, dtype=np.int64)
        return EncodedDataset(
            doc_ids=tuple(self.doc_ids[i] for i in rows),
            y=self.y[rows],
            class_names=self.class_names,
            texts=tuple(self.texts[i] for i in rows) if self.texts else (),
        )


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.70
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def load_jsonl(path) -> LabeledCorpus:
    """Read a corpus where every line is ``{"id", "text", "label"}``.

    A ``"labels"`` array may stand in for ``"label"``; it is expanded to one
    record per label so that :func:`deduplicate` can later drop the id.
    """
    records = []
    seen_ids: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise CorpusError(f"line {lineno}: expected a JSON object")
            doc_id, text = obj.get("id"), obj.get("text")
            if "label" in obj:
                labels = [obj["label"]]
            elif "labels" in obj and isinstance(obj["labels"], list):
                labels = obj["labels"]
            else:
                raise CorpusError(f"line {lineno}: missing field 'label'")
            if not isinstance(doc_id, str) or not doc_id:
                raise CorpusError(f"line {lineno}: field 'id' must be a nonempty string")
            if not isinstance(text, str):
                raise CorpusError(f"line {lineno}: field 'text' must be a string")
            if not labels or not all(isinstance(lab, str) and lab for lab in labels):
                raise CorpusError(f"line {lineno}: labels must be nonempty strings")
            if doc_id in seen_ids:
                raise CorpusError(
                    f"line {lineno}: duplicate document id {doc_id!r} "
                    f"(first seen on line {seen_ids[doc_id]})"
                )
            seen_ids[doc_id] = str(lineno)
            records.extend((doc_id, text, lab) for lab in labels)
    return LabeledCorpus.from_records(records)


def write_jsonl(corpus: LabeledCorpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc, label in zip(corpus.documents, corpus.labels):
            fh.write(json.dumps({"id": doc.id, "text": doc.text, "label": label}) + "\n")


def deduplicate(corpus: LabeledCorpus) -> LabeledCorpus:
    """Drop ids that carry more than one label; collapse same-label repeats."""
    id_labels: dict[str, set[str]] = {}
    for doc, label in zip(corpus.documents, corpus.labels):
        id_labels.setdefault(doc.id, set()).add(label)
    records, kept = [], set()
    for doc, label in zip(corpus.documents, corpus.labels):
        if len(id_labels[doc.id]) > 1 or doc.id in kept:
            continue
        kept.add(doc.id)
        records.append((doc.id, doc.text, label))
    out = LabeledCorpus.from_records(records)
    # keep the original class order for classes that survived
    survivors = set(out.class_names)
    return LabeledCorpus(
        out.documents, out.labels, tuple(c for c in corpus.class_names if c in survivors)
    )


def encode(corpus: LabeledCorpus) -> EncodedDataset:
    """Map labels to indices; classes are ordered lexicographically by name."""
    ids = [d.id for d in corpus.documents]
    dupes = [i for i, n in Counter(ids).items() if n > 1]
    if dupes:
        raise CorpusError(f"duplicate document ids, deduplicate first: {sorted(dupes)[:5]}")
    class_names = tuple(sorted(set(corpus.class_names)))
    index = {name: i for i, name in enumerate(class_names)}
    return EncodedDataset(
        doc_ids=tuple(ids),
        y=np.array([index[lab] for lab in corpus.labels], dtype=np.int64),
        class_names=class_names,
        texts=tuple(d.text for d in corpus.documents),
    )


def split(dataset: EncodedDataset, spec: SplitSpec = SplitSpec()):
    """Deterministic train/test partition; returns ``(train, test)``."""
    n = len(dataset)
    if n == 0:
        raise CorpusError("cannot split an empty dataset")
    rng = np.random.default_rng(spec.seed)
    if not spec.stratified:
        perm = rng.permutation(n)
        n_train = min(max(int(round(n * spec.train_fraction)), 1), n - 1) if n > 1 else 1
        train_rows, test_rows = perm[:n_train], perm[n_train:]
    else:
        counts = np.bincount(dataset.y, minlength=dataset.n_classes)
        quotas = _apportion(counts, spec.train_fraction)
        train_parts, test_parts = [], []
        for c in range(dataset.n_classes):
            members = np.flatnonzero(dataset.y == c)
            if len(members) == 0:
                continue
            members = members[rng.permutation(len(members))]
            if len(members) == 1:
                warnings.warn(
                    f"class {dataset.class_names[c]!r} has a single document; "
                    "it is placed in the training split",
                    stacklevel=2,
                )
            train_parts.append(members[: quotas[c]])
            test_parts.append(members[quotas[c] :])
        train_rows = np.concatenate(train_parts)
        test_rows = np.concatenate(test_parts)
    return dataset.subset(np.sort(train_rows)), dataset.subset(np.sort(test_rows))


def _apportion(counts: np.ndarray, fraction: float) -> np.ndarray:
    """Per-class train counts: floor or ceil of ``n_c * fraction`` by largest
    remainder so the total equals ``round(n * fraction)``, then clamped so a
    class with two or more members keeps at least one on each side."""
    quotas = counts * fraction
    base = np.floor(quotas).astype(np.int64)
    remaining = int(round(counts.sum() * fraction)) - int(base.sum())
    if remaining > 0:
        # stable sort: equal remainders go to the lower class index first
        order = np.argsort(-(quotas - base), kind="stable")
        base[order[:remaining]] += 1
    singles = counts == 1
    base = np.where(counts >= 2, np.clip(base, 1, counts - 1), base)
    base[singles] = 1
    return base


def binarize(y, target: int, n_classes: int | None = None) -> np.ndarray:
    """One-vs-rest relabeling: 1 where ``y == target``, else 0."""
    y = np.asarray(y, dtype=np.int64)
    upper = n_classes if n_classes is not None else (int(y.max()) + 1 if len(y) else 0)
    if target < 0 or (n_classes is not None and target >= upper):
        raise ValueError(f"target class {target} out of range for {upper} classes")
    return (y == target).astype(np.int64)
