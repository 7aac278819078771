import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from docclf.corpus import Document
from docclf.textprep import (
    StopwordSet,
    lemmatize,
    lemmatize_word,
    preprocess,
    remove_stopwords,
    tokenize,
)


def test_tokenize_examples():
    assert tokenize("Digital Finance 2021!") == ["digital", "finance"]
    assert tokenize("") == []
    assert tokenize("e-government") == ["government"]
    assert tokenize("Café résumé") == ["cafe", "resume"]
    assert tokenize("snake_case a1b2") == ["snake", "case"]


def test_remove_stopwords_examples():
    stops = StopwordSet(frozenset({"the"}), frozenset({"digital", "development", "project"}))
    assert remove_stopwords(["digital", "finance", "the", "loan"], stops) == ["finance", "loan"]
    empty = StopwordSet(frozenset(), frozenset())
    assert remove_stopwords(["a", "b"], empty) == ["a", "b"]
    assert remove_stopwords(["the", "project"], stops) == []


def test_lemmatize_examples():
    assert lemmatize(["services"]) == ["service"]
    assert lemmatize(["data"]) == ["data"]
    assert lemmatize(["policies"]) == ["policy"]
    assert lemmatize(["children", "women"]) == ["child", "woman"]
    assert lemmatize_word("classes") == "class"
    assert lemmatize_word("running") == "run"
    assert lemmatize_word("installed") == "install"


def test_preprocess_pipeline_examples():
    stops = StopwordSet.default()
    assert preprocess(Document("d", "Developing digital projects"), stops).tokens == ()
    assert preprocess(Document("d", ""), stops).tokens == ()
    a = preprocess(Document("d", "Mobile money services for farmers"), stops)
    b = preprocess(Document("d", "Mobile money services for farmers"), stops)
    assert a == b
    assert a.tokens == ("mobile", "money", "service", "farmer")


def test_domain_file(tmp_path):
    path = tmp_path / "dom.txt"
    path.write_text("# comment\nFintech\n\nloan\n", encoding="utf-8")
    stops = StopwordSet.with_domain_file(path)
    assert {"fintech", "loan"} <= stops.domain
    assert "the" in stops
    with pytest.raises(FileNotFoundError):
        StopwordSet.with_domain_file(tmp_path / "missing.txt")


words = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=2, max_size=14)


@settings(max_examples=300, deadline=None)
@given(words)
def test_lemmatize_is_idempotent(word):
    once = lemmatize_word(word)
    assert lemmatize_word(once) == once
    assert once  # never empties a token


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=80))
def test_tokens_are_lowercase_ascii_letters(text):
    for tok in tokenize(text):
        assert len(tok) >= 2
        assert tok.isascii() and tok.isalpha() and tok == tok.lower()


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=80))
def test_preprocess_output_has_no_stopwords(text):
    stops = StopwordSet.default()
    for tok in preprocess(Document("x", text), stops).tokens:
        assert tok not in stops
