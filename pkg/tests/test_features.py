import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_corpus
from oracles import document_frequencies
from langbias.corpus import Corpus, Document, Language, Sentiment
from langbias.features import (EmptyCorpusError, SparseVector, TfIdfModel, as_csr, fit_tfidf, transform,
                               transform_corpus, transform_matrix)


def D(terms, i="d", label=Sentiment.POSITIVE, lang=Language.ENGLISH):
    return Document(i, tuple(terms), label, lang, "music")


# "film" is in every document, "great" in two of four, "the" in one
FOUR = Corpus((
    D([("great", 2), ("film", 3), ("the", 5)], "1"),
    D([("film", 1), ("bad", 3)], "2", Sentiment.NEGATIVE),
    D([("great", 1), ("film", 2), ("boring", 1)], "3", Sentiment.NEGATIVE, Language.FRENCH),
    D([("film", 4), ("awful", 2)], "4", Sentiment.NEGATIVE, Language.FRENCH),
))


def idf_of(model, term):
    return model.idf[model.vocabulary[term]]


def test_four_document_idf():
    m = fit_tfidf(FOUR)
    assert m.vocabulary.terms == ["awful", "bad", "boring", "film", "great", "the"]
    assert idf_of(m, "great") == pytest.approx(0.6931471805599453, abs=1e-15)
    assert idf_of(m, "the") == pytest.approx(1.3862943611198906, abs=1e-15)
    assert idf_of(m, "film") == 0.0
    assert list(m.df) == [1, 1, 1, 4, 2, 1]


def test_four_document_tf():
    m = fit_tfidf(FOUR)
    v = transform(m, FOUR[0])
    dense = dict(zip((m.vocabulary.terms[i] for i in v.indices), v.values))
    # mass 10: great 2/10, the 5/10; film has idf 0 and is suppressed
    assert dense == pytest.approx({"great": 0.2 * math.log(2), "the": 0.5 * math.log(4)}, abs=1e-15)
    assert dense["great"] == pytest.approx(0.1386, abs=5e-5)


def test_single_document_corpus():
    m = fit_tfidf([D([("a", 1), ("b", 2)])])
    assert list(m.idf) == [0.0, 0.0]
    assert len(transform(m, D([("a", 1)]))) == 0


def test_oov_counts_in_mass():
    m = fit_tfidf(FOUR)
    v = transform(m, D([("great", 2), ("unseen", 8)]))
    assert v.values[0] == pytest.approx(0.2 * math.log(2))
    assert len(transform(m, D([("unseen", 1)]))) == 0
    assert len(transform(m, D([]))) == 0


def test_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        fit_tfidf(Corpus())
    assert transform_corpus(fit_tfidf(FOUR), Corpus()) == ([], [], [])


def test_transform_corpus_alignment():
    m = fit_tfidf(FOUR)
    rows, labels, groups = transform_corpus(m, FOUR)
    assert len(rows) == 4
    assert labels == [d.label for d in FOUR]
    assert groups == [d.language for d in FOUR]


def test_matrix_rows_equal_transform():
    c = random_corpus(np.random.default_rng(0), (20, 15, 10, 12), vocab=tuple("abcdefghij"))
    m = fit_tfidf(c[:30])
    X = transform_matrix(m, c)
    for i, doc in enumerate(c):
        assert SparseVector(X[i].indices, X[i].data) == transform(m, doc)


def test_df_matches_set_scan():
    c = random_corpus(np.random.default_rng(1), (30, 30, 30, 30), vocab=tuple("abcdefghijklmnop"))
    m = fit_tfidf(c)
    expected = document_frequencies([d.terms for d in c])
    assert {t: int(m.df[m.vocabulary[t]]) for t in m.vocabulary.terms} == expected


def test_model_round_trip(tmp_path):
    m = fit_tfidf(FOUR)
    m.save(tmp_path / "m")
    back = TfIdfModel.load(tmp_path / "m")
    assert back.vocabulary.terms == m.vocabulary.terms
    assert np.array_equal(back.idf, m.idf) and np.array_equal(back.df, m.df)
    assert back.document_count == 4


def test_as_csr_from_vectors():
    X = as_csr([SparseVector([0, 2], [1.0, 2.0]), SparseVector([], [])], n_features=3)
    assert X.toarray().tolist() == [[1.0, 0.0, 2.0], [0.0, 0.0, 0.0]]


@settings(max_examples=100, deadline=None)
@given(st.tuples(*[st.integers(0, 6)] * 4).filter(lambda s: sum(s) > 0), st.integers(0, 10_000))
def test_values_bounded_by_idf(sizes, seed):
    c = random_corpus(np.random.default_rng(seed), sizes)
    m = fit_tfidf(c)
    X = transform_matrix(m, c)
    assert np.all(X.data > 0)
    assert np.all(X.data <= m.idf.max() + 1e-15)
