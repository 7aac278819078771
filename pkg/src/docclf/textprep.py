"""Text normalization: lowercasing, tokenization, stopword removal, lemmatization."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from importlib import resources

from .corpus import Document

MIN_TOKEN_LENGTH = 2

_LETTER_RUN = re.compile(r"[^\W\d_]+")
_NON_ASCII_LETTER = re.compile(r"[^a-z]")

# irregular plurals; values must be fixed points of the suffix rules
LEMMA_EXCEPTIONS = {
    "children": "child",
    "women": "woman",
    "men": "man",
    "feet": "foot",
    "teeth": "tooth",
    "mice": "mouse",
    "geese": "goose",
    "analyses": "analysis",
    "crises": "crisis",
    "hypotheses": "hypothesis",
}

_VOWELS = frozenset("aeiou")
# doubled consonants that are kept after stripping -ing/-ed
_KEEP_DOUBLE = frozenset("lsz")


@dataclass(frozen=True)
class StopwordSet:
    standard: frozenset[str] = frozenset()
    domain: frozenset[str] = frozenset()

    def __post_init__(self):
        for term in self.standard | self.domain:
            if term != term.lower() or any(ch.isspace() for ch in term) or not term:
                raise ValueError(f"invalid stopword {term!r}")

    def __contains__(self, term):
        return term in self.standard or term in self.domain

    @property
    def terms(self) -> frozenset[str]:
        return self.standard | self.domain

    @classmethod
    def default(cls) -> "StopwordSet":
        return cls(
            standard=frozenset(_read_terms(_data_text("stopwords_en.txt"))),
            domain=frozenset(_read_terms(_data_text("domain_stopwords.txt"))),
        )

    @classmethod
    def with_domain_file(cls, path) -> "StopwordSet":
        with open(path, encoding="utf-8") as fh:
            domain = frozenset(_read_terms(fh.read()))
        return cls(standard=cls.default().standard, domain=domain)


@dataclass(frozen=True)
class TokenizedDoc:
    doc_id: str
    tokens: tuple[str, ...]


def _data_text(name: str) -> str:
    return resources.files("docclf.data").joinpath(name).read_text(encoding="utf-8")


def _read_terms(text: str) -> list[str]:
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.append(line.lower())
    return terms


def _fold(run: str) -> str:
    decomposed = unicodedata.normalize("NFKD", run)
    return _NON_ASCII_LETTER.sub("", decomposed.lower())


def tokenize(text: str) -> list[str]:
    """Lowercased ASCII letter runs of length >= 2.

    Letters with a compatibility decomposition are folded to ASCII
    (``"Café"`` -> ``"cafe"``); letters without one are dropped.
    """
    tokens = []
    for run in _LETTER_RUN.findall(text):
        token = _fold(run)
        if len(token) >= MIN_TOKEN_LENGTH:
            tokens.append(token)
    return tokens


def remove_stopwords(tokens, stops: StopwordSet) -> list[str]:
    return [t for t in tokens if t not in stops]


def _undouble(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS | _KEEP_DOUBLE:
        return stem[:-1]
    return stem


def _strip_suffix(word: str) -> str:
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("es") and len(word) - 2 >= 3:
        return word[:-1]
    if word.endswith("s") and len(word) > 2 and word[-2] not in _VOWELS and word[-2] != "s":
        return word[:-1]
    if word.endswith("ing") and len(word) - 3 >= 3:
        return _undouble(word[:-3])
    if word.endswith("ed") and len(word) - 2 >= 3:
        return _undouble(word[:-2])
    return word


def lemmatize_word(word: str) -> str:
    # rules applied until nothing matches, so the mapping is idempotent
    while True:
        if word in LEMMA_EXCEPTIONS:
            return LEMMA_EXCEPTIONS[word]
        stripped = _strip_suffix(word)
        if stripped == word:
            return word
        word = stripped


def lemmatize(tokens) -> list[str]:
    return [lemmatize_word(t) for t in tokens]


def preprocess(doc: Document, stops: StopwordSet) -> TokenizedDoc:
    tokens = remove_stopwords(tokenize(doc.text), stops)
    tokens = remove_stopwords(lemmatize(tokens), stops)
    return TokenizedDoc(doc.id, tuple(tokens))
