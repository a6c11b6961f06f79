"""Multinomial Naive Bayes over real-valued (TF-IDF) features, in log space."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..corpus import Sentiment
from ..features import SparseVector
from ._common import NegativeFeatureError, check_matrix, check_vector, training_data

FORMAT_VERSION = 1
CLASSES = (Sentiment.NEGATIVE, Sentiment.POSITIVE)


@dataclass
class NbModel:
    """Fitted parameters; row ``c`` of each array belongs to ``Sentiment(c)``."""

    alpha: float
    log_prior: np.ndarray       # (2,)
    log_likelihood: np.ndarray  # (2, V)

    @property
    def size(self) -> int:
        return self.log_likelihood.shape[1]

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# langbias multinomial-nb\n")
            fh.write(f"version\t{FORMAT_VERSION}\nalpha\t{self.alpha!r}\nvocab_size\t{self.size}\n")
            fh.write("classes\t" + ",".join(c.word for c in CLASSES) + "\n")
            for c in CLASSES:
                fh.write(f"log_prior\t{c.word}\t{float(self.log_prior[c])!r}\n")
            for c in CLASSES:
                fh.write(f"log_likelihood\t{c.word}\t")
                fh.write(" ".join(repr(float(v)) for v in self.log_likelihood[c]))
                fh.write("\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "NbModel":
        header, prior, loglik = {}, {}, {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if parts[0] == "log_prior":
                    prior[parts[1]] = float(parts[2])
                elif parts[0] == "log_likelihood":
                    loglik[parts[1]] = np.array(parts[2].split(), dtype=np.float64) if parts[2] else np.zeros(0)
                else:
                    header[parts[0]] = parts[1]
        if int(header["version"]) != FORMAT_VERSION:
            raise ValueError(f"unsupported NB model version in {path}")
        v = int(header["vocab_size"])
        ll = np.vstack([loglik[c.word] for c in CLASSES]).reshape(2, v)
        return cls(float(header["alpha"]), np.array([prior[c.word] for c in CLASSES]), ll)


def nb_fit(matrix, labels, alpha: float = 1.0) -> NbModel:
    """Fit class priors and smoothed per-class feature distributions.

    ``log_likelihood[c, i] = log((S[c, i] + alpha) / (S[c] + alpha * V))``
    where ``S[c, i]`` sums feature ``i`` over the rows of class ``c``.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    X, y = training_data(matrix, labels)
    if X.nnz and X.data.min() < 0:
        raise NegativeFeatureError("Naive Bayes needs non-negative features")
    n, v = X.shape
    log_prior = np.empty(2)
    log_likelihood = np.empty((2, v))
    for c in CLASSES:
        rows = y == c
        log_prior[c] = np.log(rows.sum() / n)
        mass = np.asarray(X[rows].sum(axis=0)).ravel()
        log_likelihood[c] = np.log(mass + alpha) - np.log(mass.sum() + alpha * v)
    return NbModel(float(alpha), log_prior, log_likelihood)


TIE_RTOL = 1e-12


def _decide(scores: np.ndarray) -> np.ndarray:
    # Scores equal up to rounding are ties, and ties go to NEGATIVE. Log-space
    # sums of exactly tied posteriors can otherwise differ in the last ulp.
    s0, s1 = scores[..., 0], scores[..., 1]
    tol = TIE_RTOL * np.maximum(1.0, np.maximum(np.abs(s0), np.abs(s1)))
    return (s1 - s0 > tol).astype(np.int64)


def nb_predict(model: NbModel, x: SparseVector) -> tuple[Sentiment, dict[Sentiment, float]]:
    check_vector(x, model.size)
    scores = model.log_prior + model.log_likelihood[:, x.indices] @ x.values
    label = Sentiment(int(_decide(scores)))
    return label, {c: float(scores[c]) for c in CLASSES}


def nb_log_scores(model: NbModel, X) -> np.ndarray:
    X = check_matrix(X, model.size)
    return np.asarray(X @ model.log_likelihood.T) + model.log_prior


def nb_predict_matrix(model: NbModel, X) -> np.ndarray:
    """Vectorized :func:`nb_predict`; returns 0/1 labels."""
    return _decide(nb_log_scores(model, X))
