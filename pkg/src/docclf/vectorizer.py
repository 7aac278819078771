"""TF-IDF vectorization over a frozen, training-only vocabulary.

Weights are ``count(t, d) * (ln((1 + N) / (1 + df(t))) + 1)`` followed by
L2 normalization of each document row. Rows are scipy CSR matrices.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .textprep import TokenizedDoc

FORMULA_VERSION = "tfidf-smooth-l2-v1"


class EmptyVocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]
    df: tuple[int, ...]
    n_docs: int
    min_df: int = 2
    max_features: int | None = None

    def __post_init__(self):
        if len(self.terms) != len(self.df):
            raise ValueError("terms and df differ in length")
        if list(self.terms) != sorted(self.terms) or len(set(self.terms)) != len(self.terms):
            raise ValueError("terms must be unique and sorted")
        if any(d > self.n_docs or d < 1 for d in self.df):
            raise ValueError("document frequency outside [1, n_docs]")
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    def __len__(self):
        return len(self.terms)

    def __contains__(self, term):
        return term in self._index

    def index(self, term: str) -> int:
        return self._index[term]

    @property
    def mapping(self) -> dict[str, int]:
        return dict(self._index)

    @property
    def idf(self) -> np.ndarray:
        df = np.asarray(self.df, dtype=np.float64)
        return np.log((1.0 + self.n_docs) / (1.0 + df)) + 1.0

    def to_dict(self) -> dict:
        return {
            "formula": FORMULA_VERSION,
            "n_docs": self.n_docs,
            "min_df": self.min_df,
            "max_features": self.max_features,
            "terms": [[t, i, d] for i, (t, d) in enumerate(zip(self.terms, self.df))],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Vocabulary":
        if data.get("formula") != FORMULA_VERSION:
            raise ValueError(
                f"vocabulary formula {data.get('formula')!r} is not {FORMULA_VERSION!r}"
            )
        rows = sorted(data["terms"], key=lambda r: r[1])
        if [r[1] for r in rows] != list(range(len(rows))):
            raise ValueError("vocabulary indices are not contiguous")
        return cls(
            terms=tuple(r[0] for r in rows),
            df=tuple(int(r[2]) for r in rows),
            n_docs=int(data["n_docs"]),
            min_df=int(data["min_df"]),
            max_features=data.get("max_features"),
        )


def _tokens(doc) -> tuple[str, ...]:
    return doc.tokens if isinstance(doc, TokenizedDoc) else tuple(doc)


def fit_vocabulary(corpus, min_df: int = 2, max_features: int | None = None) -> Vocabulary:
    """Keep terms with document frequency >= ``min_df``; optionally cap the
    count to the ``max_features`` highest-df terms (ties lexicographic)."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    if max_features is not None and max_features < 1:
        raise ValueError("max_features must be >= 1")
    docs = [_tokens(d) for d in corpus]
    if not docs:
        raise ValueError("cannot fit a vocabulary on an empty corpus")
    df = Counter()
    for tokens in docs:
        df.update(set(tokens))
    kept = [(t, n) for t, n in df.items() if n >= min_df]
    if max_features is not None and len(kept) > max_features:
        kept.sort(key=lambda item: (-item[1], item[0]))
        kept = kept[:max_features]
    if not kept:
        raise EmptyVocabularyError(f"no term reaches min_df={min_df}")
    kept.sort()
    return Vocabulary(
        terms=tuple(t for t, _ in kept),
        df=tuple(n for _, n in kept),
        n_docs=len(docs),
        min_df=min_df,
        max_features=max_features,
    )


def _rows(docs, vocab: Vocabulary, idf: np.ndarray) -> sp.csr_matrix:
    indptr, indices, data = [0], [], []
    for doc in docs:
        counts = Counter(t for t in _tokens(doc) if t in vocab)
        cols = np.array(sorted(vocab.index(t) for t in counts), dtype=np.int64)
        if len(cols):
            weights = np.array([counts[vocab.terms[j]] for j in cols], dtype=np.float64)
            weights *= idf[cols]
            weights /= np.sqrt(np.dot(weights, weights))
            indices.append(cols)
            data.append(weights)
        indptr.append(indptr[-1] + len(cols))
    return sp.csr_matrix(
        (
            np.concatenate(data) if data else np.array([], dtype=np.float64),
            np.concatenate(indices) if indices else np.array([], dtype=np.int64),
            np.array(indptr, dtype=np.int64),
        ),
        shape=(len(indptr) - 1, len(vocab)),
    )


def transform(doc, vocab: Vocabulary) -> sp.csr_matrix:
    """One document as a 1 x V L2-normalized row; unknown tokens are ignored."""
    return _rows([doc], vocab, vocab.idf)


def transform_many(docs, vocab: Vocabulary) -> sp.csr_matrix:
    return _rows(docs, vocab, vocab.idf)


def fit_transform(corpus, min_df: int = 2, max_features: int | None = None):
    corpus = list(corpus)
    vocab = fit_vocabulary(corpus, min_df=min_df, max_features=max_features)
    return vocab, transform_many(corpus, vocab)


class TfidfVectorizer(TransformerMixin, BaseEstimator):
    """Estimator wrapper: ``fit`` on token sequences, ``transform`` to CSR."""

    def __init__(self, min_df=2, max_features=None):
        self.min_df = min_df
        self.max_features = max_features

    def fit(self, docs, y=None):
        self.vocabulary_ = fit_vocabulary(docs, self.min_df, self.max_features)
        return self

    def transform(self, docs):
        check_is_fitted(self, "vocabulary_")
        return transform_many(docs, self.vocabulary_)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.array(self.vocabulary_.terms, dtype=object)
