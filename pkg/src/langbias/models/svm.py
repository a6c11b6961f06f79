"""Linear SVM trained by dual coordinate descent on the hinge loss.

The bias is learned as the weight of a constant feature ``bias_scale``
appended to every example, so the optimized problem is::

    min_w,b  1/2 (|w|^2 + (b / bias_scale)^2) + C * sum_j max(0, 1 - y_j (w.x_j + b))

Each epoch visits the examples in a fresh seeded order and maximizes the
dual exactly along one coordinate at a time, which makes the dual objective
non-decreasing from epoch to epoch.
"""

from __future__ import annotations

import ast
import os
from dataclasses import dataclass, field

import numpy as np

from ..corpus import Sentiment
from ..features import SparseVector
from ._common import check_matrix, check_vector, training_data
from ._kernels import get_kernel

FORMAT_VERSION = 1
SOLVER = "dual-cd-l1loss/v1"


@dataclass(frozen=True)
class TrainOptions:
    tolerance: float = 1e-4
    max_iterations: int = 1000
    seed: int = 0
    bias_scale: float = 1.0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class SvmModel:
    weights: np.ndarray
    bias: float
    c_param: float
    training_meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.weights)

    def save(self, path: str | os.PathLike) -> None:
        meta = self.training_meta
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# langbias linear-svm\n")
            fh.write(f"version\t{FORMAT_VERSION}\nc\t{self.c_param!r}\nbias\t{self.bias!r}\n")
            fh.write(f"vocab_size\t{self.size}\n")
            for key in ("solver", "iterations", "converged", "max_violation",
                        "primal_objective", "dual_objective", "seed", "tolerance", "bias_scale"):
                if key in meta:
                    fh.write(f"meta.{key}\t{meta[key]!r}\n")
            fh.write("weights\n")
            for i in np.flatnonzero(self.weights):
                fh.write(f"{i}\t{float(self.weights[i])!r}\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "SvmModel":
        header = {}
        weights = None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                if line == "weights":
                    weights = np.zeros(int(header["vocab_size"]))
                    continue
                a, b = line.split("\t")
                if weights is None:
                    header[a] = b
                else:
                    weights[int(a)] = float(b)
        if int(header["version"]) != FORMAT_VERSION:
            raise ValueError(f"unsupported SVM model version in {path}")
        meta = {}
        for k, v in header.items():
            if k.startswith("meta."):
                meta[k[5:]] = _literal(v)
        if weights is None:
            weights = np.zeros(int(header["vocab_size"]))
        return cls(weights, float(header["bias"]), float(header["c"]), meta)


def _literal(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def primal_objective(w: np.ndarray, X, y_pm: np.ndarray, C: float, bias_scale: float = 1.0) -> float:
    """``1/2 |w|^2 + C * sum hinge``; ``w`` ends with the constant feature's weight."""
    margins = y_pm * (X @ w[:-1] + w[-1] * bias_scale)
    return 0.5 * float(w @ w) + C * float(np.maximum(0.0, 1.0 - margins).sum())


def svm_fit(matrix, labels, c_param: float = 1.0, options: TrainOptions | None = None,
            backend: str | None = None) -> SvmModel:
    """Train a linear SVM; labels are :class:`Sentiment` values (NEGATIVE -> -1).

    Stops once the largest projected-gradient violation of an epoch drops
    below ``options.tolerance`` or after ``options.max_iterations`` epochs.
    ``training_meta["dual_history"]`` holds the dual objective after each epoch.
    """
    options = options or TrainOptions()
    if not c_param > 0:
        raise ValueError(f"C must be positive, got {c_param}")
    X, y01 = training_data(matrix, labels)
    n, v = X.shape
    indptr = X.indptr.astype(np.int64)
    indices = X.indices.astype(np.int32)
    data = X.data.astype(np.float64)
    y = np.where(y01 == 1, 1.0, -1.0)
    s = float(options.bias_scale)
    qii = np.asarray(X.multiply(X).sum(axis=1)).ravel() + s * s
    alpha = np.zeros(n)
    w = np.zeros(v + 1)  # last slot: bias weight

    backend_name, epoch = get_kernel(backend)
    rng = np.random.Generator(np.random.PCG64(options.seed))
    C = float(c_param)
    history = []
    converged = False
    violation = float("inf")
    it = 0
    for it in range(1, options.max_iterations + 1):
        order = rng.permutation(n).astype(np.int64)
        violation = epoch(indptr, indices, data, y, alpha, w, qii, order, C, s)
        dual = float(alpha.sum() - 0.5 * (w @ w))
        assert not history or dual >= history[-1] - 1e-9 * max(1.0, abs(dual)), \
            "dual objective decreased"
        history.append(dual)
        if violation < options.tolerance:
            converged = True
            break

    meta = {
        "solver": SOLVER,
        "backend": backend_name,
        "iterations": it,
        "converged": converged,
        "max_violation": float(violation),
        "primal_objective": primal_objective(w, X, y, C, s),
        "dual_objective": history[-1],
        "dual_history": history,
        "seed": options.seed,
        "tolerance": options.tolerance,
        "bias_scale": s,
    }
    return SvmModel(w[:-1].copy(), float(w[-1] * s), C, meta)


def svm_decision(model: SvmModel, x: SparseVector) -> float:
    check_vector(x, model.size)
    return float(model.weights[x.indices] @ x.values) + model.bias


def svm_predict(model: SvmModel, x: SparseVector) -> Sentiment:
    # exactly zero goes to NEGATIVE
    return Sentiment.POSITIVE if svm_decision(model, x) > 0 else Sentiment.NEGATIVE


def svm_decision_matrix(model: SvmModel, X) -> np.ndarray:
    X = check_matrix(X, model.size)
    return np.asarray(X @ model.weights) + model.bias


def svm_predict_matrix(model: SvmModel, X) -> np.ndarray:
    return (svm_decision_matrix(model, X) > 0).astype(np.int64)
