from __future__ import annotations

import numpy as np

from ..features import SparseVector, as_csr


class SingleClassError(ValueError):
    pass


class NegativeFeatureError(ValueError):
    pass


class IndexOutOfVocabularyError(IndexError):
    pass


def labels_array(labels) -> np.ndarray:
    y = np.asarray([int(v) for v in labels], dtype=np.int64)
    if np.any((y != 0) & (y != 1)):
        raise ValueError("labels must be Sentiment values (0 or 1)")
    return y


def training_data(matrix, labels):
    X = as_csr(matrix)
    y = labels_array(labels)
    if X.shape[0] == 0:
        raise ValueError("training data is empty")
    if X.shape[0] != len(y):
        raise ValueError(f"{X.shape[0]} rows but {len(y)} labels")
    if len(np.unique(y)) < 2:
        raise SingleClassError("training labels contain a single class")
    return X, y


def check_vector(x: SparseVector, size: int) -> None:
    if len(x.indices) and (x.indices.max() >= size or x.indices.min() < 0):
        raise IndexOutOfVocabularyError(
            f"feature index {int(x.indices.max())} outside vocabulary of size {size}")


def check_matrix(X, size: int):
    X = as_csr(X)
    if X.nnz and X.indices.max() >= size:
        raise IndexOutOfVocabularyError(f"feature index outside vocabulary of size {size}")
    if X.shape[1] != size:
        X = X.copy()
        X.resize((X.shape[0], size))
    return X
