"""TF-IDF vectorization over bag-of-words documents.

Term frequency is a term's count divided by the document's total count mass
(out-of-vocabulary terms included); inverse document frequency is the natural
log of ``N / df``. No smoothing, no row normalization.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, Document, Language, Sentiment

FORMAT_VERSION = 1
LOG_BASE = "e"


class EmptyCorpusError(ValueError):
    pass


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.indices.shape != self.values.shape or self.indices.ndim != 1:
            raise ValueError("indices and values must be 1-D and of equal length")

    def __len__(self) -> int:
        return len(self.indices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (np.array_equal(self.indices, other.indices)
                and np.array_equal(self.values, other.values))

    @classmethod
    def from_dense(cls, dense: Sequence[float]) -> "SparseVector":
        dense = np.asarray(dense, dtype=np.float64)
        nz = np.flatnonzero(dense)
        return cls(nz, dense[nz])

    def to_dense(self, size: int) -> np.ndarray:
        out = np.zeros(size)
        out[self.indices] = self.values
        return out


class Vocabulary:
    """Bijection between terms and feature indices, in lexicographic term order."""

    def __init__(self, terms: Iterable[str]):
        self.terms: list[str] = sorted(set(terms))
        self.index: dict[str, int] = {t: i for i, t in enumerate(self.terms)}

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.index

    def __getitem__(self, term: str) -> int:
        return self.index[term]


@dataclass
class TfIdfModel:
    vocabulary: Vocabulary
    df: np.ndarray
    idf: np.ndarray
    document_count: int

    @property
    def size(self) -> int:
        return len(self.vocabulary)

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# langbias tfidf\nversion\t{FORMAT_VERSION}\nlog_base\t{LOG_BASE}\n")
            fh.write(f"document_count\t{self.document_count}\nvocab_size\t{self.size}\n")
            for term, df, idf in zip(self.vocabulary.terms, self.df, self.idf):
                fh.write(f"{term}\t{int(df)}\t{float(idf)!r}\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "TfIdfModel":
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        header = {}
        body = [ln for ln in lines if ln and not ln.startswith("#")]
        for ln in body[:4]:
            key, value = ln.split("\t")
            header[key] = value
        if int(header["version"]) != FORMAT_VERSION or header["log_base"] != LOG_BASE:
            raise ValueError(f"unsupported tfidf model file {path}")
        rows = [ln.split("\t") for ln in body[4:]]
        if len(rows) != int(header["vocab_size"]):
            raise ValueError(f"{path}: vocabulary size mismatch")
        vocab = Vocabulary(r[0] for r in rows)
        if vocab.terms != [r[0] for r in rows]:
            raise ValueError(f"{path}: vocabulary not in canonical order")
        df = np.array([int(r[1]) for r in rows], dtype=np.int64)
        idf = np.array([float(r[2]) for r in rows], dtype=np.float64)
        return cls(vocab, df, idf, int(header["document_count"]))


def fit_tfidf(corpus: Corpus | Sequence[Document]) -> TfIdfModel:
    docs = list(corpus)
    if not docs:
        raise EmptyCorpusError("cannot fit TF-IDF on an empty corpus")
    df_counts: dict[str, int] = {}
    for doc in docs:
        for term in {t for t, _ in doc.terms}:
            df_counts[term] = df_counts.get(term, 0) + 1
    vocab = Vocabulary(df_counts)
    n = len(docs)
    df = np.array([df_counts[t] for t in vocab.terms], dtype=np.int64)
    idf = np.array([math.log(n / d) for d in df.tolist()], dtype=np.float64)
    return TfIdfModel(vocab, df, idf, n)


def _row(model: TfIdfModel, doc: Document) -> tuple[list[int], list[float]]:
    mass = doc.mass
    if mass == 0:
        return [], []
    acc: dict[int, int] = {}
    index = model.vocabulary.index
    for term, count in doc.terms:
        j = index.get(term)
        if j is not None:
            acc[j] = acc.get(j, 0) + count
    cols, vals = [], []
    for j in sorted(acc):
        v = (acc[j] / mass) * model.idf[j]
        if v != 0.0:
            cols.append(j)
            vals.append(float(v))
    return cols, vals


def transform(model: TfIdfModel, doc: Document) -> SparseVector:
    cols, vals = _row(model, doc)
    return SparseVector(cols, vals)


def transform_corpus(model: TfIdfModel, corpus: Corpus | Sequence[Document]
                     ) -> tuple[list[SparseVector], list[Sentiment], list[Language]]:
    docs = list(corpus)
    return ([transform(model, d) for d in docs],
            [d.label for d in docs],
            [d.language for d in docs])


def transform_matrix(model: TfIdfModel, corpus: Corpus | Sequence[Document]) -> sp.csr_matrix:
    """Like :func:`transform_corpus` but returns the rows as one CSR matrix."""
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for doc in corpus:
        cols, vals = _row(model, doc)
        indices.extend(cols)
        data.extend(vals)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int32),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(indptr) - 1, model.size),
    )


def as_csr(matrix, n_features: int | None = None) -> sp.csr_matrix:
    """Accept a CSR-convertible matrix or a list of :class:`SparseVector` rows."""
    if sp.issparse(matrix):
        return sp.csr_matrix(matrix, dtype=np.float64)
    if isinstance(matrix, np.ndarray):
        return sp.csr_matrix(np.atleast_2d(matrix), dtype=np.float64)
    rows = list(matrix)
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    for i, r in enumerate(rows):
        indptr[i + 1] = indptr[i] + len(r)
    indices = np.concatenate([r.indices for r in rows]) if rows else np.zeros(0, np.int64)
    data = np.concatenate([r.values for r in rows]) if rows else np.zeros(0)
    if n_features is None:
        n_features = int(indices.max()) + 1 if len(indices) else 0
    return sp.csr_matrix((data, indices, indptr), shape=(len(rows), n_features))
