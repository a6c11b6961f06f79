import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_corpus
from langbias.corpus import (Corpus, Document, DuplicateLabelError, Language, MalformedPairError,
                             MissingLabelError, Sentiment, UnknownLabelError, load_corpus, parse_line,
                             read_cache, subgroup_counts, write_cache)


@pytest.mark.parametrize("line, terms, label", [
    ("really:1 funny:1 #label#:negative", [("really", 1), ("funny", 1)], Sentiment.NEGATIVE),
    ("le:4 #label#:negative", [("le", 4)], Sentiment.NEGATIVE),
    ("a:1 a:2 #label#:positive", [("a", 3)], Sentiment.POSITIVE),
    ("..:2 'est:1 #label#:positive", [("..", 2), ("'est", 1)], Sentiment.POSITIVE),
    (":):3 a:b:1 #label#:negative", [(":)", 3), ("a:b", 1)], Sentiment.NEGATIVE),
    ("#label#:positive", [], Sentiment.POSITIVE),
])
def test_parse_line(line, terms, label):
    assert parse_line(line) == (terms, label)


@pytest.mark.parametrize("line, error", [
    ("a:1 b:2", MissingLabelError),
    ("a:x #label#:positive", MalformedPairError),
    ("a:0 #label#:positive", MalformedPairError),
    ("a:-1 #label#:positive", MalformedPairError),
    ("a #label#:positive", MalformedPairError),
    ("a:1 #label#:neutral", UnknownLabelError),
    ("#label#:positive #label#:negative", DuplicateLabelError),
])
def test_parse_line_errors(line, error):
    with pytest.raises(error):
        parse_line(line)


def test_load_corpus(tmp_path):
    p = tmp_path / "music.processed"
    p.write_text("a:1 #label#:positive\r\n\nb:2 #label#:negative\nc:1 d:1 #label#:positive\n", encoding="utf-8")
    c = load_corpus(p, "fr", "music")
    assert len(c) == 3
    assert all(d.language == Language.FRENCH and d.domain == "music" for d in c)
    assert [d.id for d in c] == [f"{p}:1", f"{p}:3", f"{p}:4"]
    assert c.sources == (str(p),)
    assert c[0].terms == (("a", 1),)


def test_load_empty_file(tmp_path):
    p = tmp_path / "empty.processed"
    p.write_text("")
    assert len(load_corpus(p, Language.ENGLISH, "books")) == 0


def test_load_reports_line(tmp_path):
    p = tmp_path / "bad.processed"
    p.write_text("a:1 #label#:positive\nb:1 c:2\n")
    with pytest.raises(MissingLabelError) as info:
        load_corpus(p, "en", "dvd")
    assert info.value.lineno == 2
    assert f"{p}:2" in str(info.value)


def test_load_missing_path(tmp_path):
    with pytest.raises(OSError):
        load_corpus(tmp_path / "nope", "en", "dvd")


def test_subgroup_counts_examples():
    docs = [Document("1", (), Sentiment.POSITIVE, Language.ENGLISH, "m"),
            Document("2", (), Sentiment.POSITIVE, Language.ENGLISH, "m"),
            Document("3", (), Sentiment.NEGATIVE, Language.FRENCH, "m")]
    assert subgroup_counts(Corpus(tuple(docs))) == {
        (Language.ENGLISH, Sentiment.POSITIVE): 2, (Language.ENGLISH, Sentiment.NEGATIVE): 0,
        (Language.FRENCH, Sentiment.POSITIVE): 0, (Language.FRENCH, Sentiment.NEGATIVE): 1}
    assert set(subgroup_counts(Corpus()).values()) == {0}


def test_subgroup_counts_large_scan():
    rng = np.random.default_rng(5)
    lang = rng.integers(0, 2, 40_000)
    sent = rng.integers(0, 2, 40_000)
    docs = tuple(Document(str(i), (), Sentiment(int(s)), Language(int(g)), "m")
                 for i, (g, s) in enumerate(zip(lang, sent)))
    counts = subgroup_counts(Corpus(docs))
    for (g, s), n in counts.items():
        assert n == int(((lang == g) & (sent == s)).sum())
    assert sum(counts.values()) == 40_000


tokens = st.text(alphabet=st.characters(blacklist_categories=("Zs", "Cc", "Zl", "Zp"),
                                        blacklist_characters="\x85\x1c\x1d\x1e\x1f"),
                 min_size=1, max_size=6).filter(lambda t: t != "#label#")


@given(st.dictionaries(tokens, st.integers(1, 50), max_size=8), st.sampled_from(list(Sentiment)))
def test_round_trip(terms, label):
    doc = Document("x", tuple(terms.items()), label, Language.ENGLISH, "music")
    parsed_terms, parsed_label = parse_line(doc.to_line())
    assert dict(parsed_terms) == terms
    assert parsed_label == label


def test_cache_round_trip(tmp_path):
    c = random_corpus(np.random.default_rng(1), (3, 2, 4, 1))
    write_cache(c, tmp_path / "c.cache")
    back = read_cache(tmp_path / "c.cache")
    assert [(d.terms, d.label, d.language, d.domain) for d in back] == \
           [(d.terms, d.label, d.language, d.domain) for d in c]
