"""Seeded synthetic labeled corpora for tests, demos and acceptance runs.

Every class owns a keyword pool. Each document draws its tokens from the
shared background pool (``noise_fraction``), occasionally from another
class's pool (``bleed``), and otherwise from its own pool. The pools of the
designated ``overlap_classes`` consist of ``overlap_fraction`` words taken
from the shared noise pool (the same words for all of them) plus exclusive
words, so those classes carry less signal and are easily confused.
Keywords given in ``seed_keywords`` join their class's pool and also
appear once in every document of that class, so they dominate its profile.
Documents also carry a few stopwords, digits and punctuation so that the
preprocessing stage has something to remove.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus import LabeledCorpus
from ..textprep import StopwordSet, lemmatize_word

INTERVENTION_AREAS = (
    "Child Protection",
    "Cybersecurity",
    "Data Privacy",
    "Data Systems & development",
    "Digital Finance",
    "Digital Inclusion",
    "Digital Information Services",
    "Digital Infrastructure Development",
    "Digital literacy",
    "Policy & regulation",
    "E-government",
    "Upskilling/ Capacity Building",
)

# 615 documents spread from 13 to 149 per class
REFERENCE_SIZES = (26, 45, 13, 84, 149, 110, 60, 40, 20, 18, 25, 25)

_CONSONANTS = "bdfgklmnprtvz"
_VOWELS = "aiou"
_FILLER = ("the", "of", "and", "in", "digital", "development", "project", "2021", "-", ",")


@dataclass
class SyntheticSpec:
    class_names: tuple[str, ...] = INTERVENTION_AREAS
    class_sizes: tuple[int, ...] = REFERENCE_SIZES
    keywords_per_class: int = 25
    noise_pool_size: int = 150
    doc_length: tuple[int, int] = (20, 60)
    noise_fraction: float = 0.5
    bleed: float = 0.05
    overlap_classes: tuple[str, ...] = ()
    overlap_fraction: float = 0.6
    filler_rate: float = 0.1
    seed_keywords: dict[str, tuple[str, ...]] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if len(self.class_names) != len(self.class_sizes):
            raise ValueError("class_names and class_sizes differ in length")
        if len(self.class_names) < 2:
            raise ValueError("need at least two classes")
        unknown = set(self.overlap_classes) - set(self.class_names)
        if unknown:
            raise ValueError(f"unknown overlap classes {sorted(unknown)}")
        lo, hi = self.doc_length
        if self.overlap_classes and round(self.keywords_per_class * self.overlap_fraction) > self.noise_pool_size:
            raise ValueError("noise pool too small for the shared overlap words")
        if not 1 <= lo <= hi:
            raise ValueError("doc_length must satisfy 1 <= low <= high")
        for name in ("noise_fraction", "bleed", "overlap_fraction", "filler_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def _pseudo_words(rng, count, taken: set[str]) -> list[str]:
    """Letters-only words that survive tokenization, stopword removal and
    lemmatization unchanged (they end in a vowel other than ``e``)."""
    stops = StopwordSet.default()
    words = []
    while len(words) < count:
        n_syl = int(rng.integers(2, 4))
        word = "".join(
            _CONSONANTS[rng.integers(len(_CONSONANTS))] + _VOWELS[rng.integers(len(_VOWELS))]
            for _ in range(n_syl)
        )
        if word in taken or word in stops or lemmatize_word(word) != word:
            continue
        taken.add(word)
        words.append(word)
    return words


def make_corpus(spec: SyntheticSpec = SyntheticSpec()) -> LabeledCorpus:
    rng = np.random.default_rng(spec.seed)
    taken: set[str] = {w for ws in spec.seed_keywords.values() for w in ws}
    noise = _pseudo_words(rng, spec.noise_pool_size, taken)
    n_shared = int(round(spec.keywords_per_class * spec.overlap_fraction))
    shared = [noise[i] for i in rng.choice(len(noise), n_shared, replace=False)]
    pools = {}
    for name in spec.class_names:
        own = list(spec.seed_keywords.get(name, ()))
        if name in spec.overlap_classes:
            own += shared + _pseudo_words(rng, spec.keywords_per_class - n_shared, taken)
        else:
            own += _pseudo_words(rng, spec.keywords_per_class, taken)
        pools[name] = own

    records = []
    lo, hi = spec.doc_length
    for ci, (name, size) in enumerate(zip(spec.class_names, spec.class_sizes)):
        others = [n for n in spec.class_names if n != name]
        for j in range(size):
            length = int(rng.integers(lo, hi + 1))
            tokens = list(spec.seed_keywords.get(name, ()))
            for _ in range(length):
                u = rng.random()
                if u < spec.noise_fraction:
                    tokens.append(noise[rng.integers(len(noise))])
                elif u < spec.noise_fraction + spec.bleed:
                    pool = pools[others[rng.integers(len(others))]]
                    tokens.append(pool[rng.integers(len(pool))])
                else:
                    pool = pools[name]
                    tokens.append(pool[rng.integers(len(pool))])
                if rng.random() < spec.filler_rate:
                    tokens.append(_FILLER[rng.integers(len(_FILLER))])
            text = " ".join(tokens).capitalize() + "."
            records.append((f"c{ci:02d}-d{j:04d}", text, name))
    return LabeledCorpus.from_records(records)


def acceptance_spec(seed: int = 0) -> SyntheticSpec:
    """Twelve classes at the 13-149 document scale; two overlap classes.

    Documents are mostly background noise, so the overlap classes, whose
    pools are 60% noise words, are the hard ones.
    """
    return SyntheticSpec(
        noise_fraction=0.85,
        doc_length=(30, 50),
        bleed=0.0,
        overlap_classes=("Data Systems & development", "Digital Inclusion"),
        overlap_fraction=0.6,
        seed=seed,
    )
