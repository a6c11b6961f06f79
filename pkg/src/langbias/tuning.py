"""Cross-validated hyperparameter search for the NB and SVM classifiers."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .features import as_csr
from .models import TrainOptions, nb_fit, nb_predict_matrix, svm_fit, svm_predict_matrix
from .models._common import labels_array
from .sampling import SplitMix64, permutation

_KFOLD = 4
_TRIALS = 5


class KTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class LogUniform:
    low: float
    high: float

    def __post_init__(self):
        if not 0 < self.low <= self.high:
            raise ValueError("log-uniform bounds must satisfy 0 < low <= high")

    def sample(self, rng: SplitMix64) -> float:
        u = rng.next_u64() / 2.0 ** 64
        return math.exp(math.log(self.low) + u * (math.log(self.high) - math.log(self.low)))

    def describe(self) -> str:
        return f"loguniform[{self.low!r},{self.high!r}]"


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def __post_init__(self):
        if not self.low <= self.high:
            raise ValueError("uniform bounds must satisfy low <= high")

    def sample(self, rng: SplitMix64) -> float:
        return self.low + rng.next_u64() / 2.0 ** 64 * (self.high - self.low)

    def describe(self) -> str:
        return f"uniform[{self.low!r},{self.high!r}]"


@dataclass(frozen=True)
class Choice:
    options: tuple

    def __post_init__(self):
        if not self.options:
            raise ValueError("choice set must be non-empty")

    def sample(self, rng: SplitMix64):
        return self.options[rng.below(len(self.options))]

    def describe(self) -> str:
        return "choice{" + ",".join(repr(o) for o in self.options) + "}"


SearchSpace = dict  # parameter name -> LogUniform | Uniform | Choice

DEFAULT_SPACES: dict[str, SearchSpace] = {
    "svm": {"c": LogUniform(1e-3, 1e3)},
    "nb": {"alpha": LogUniform(1e-3, 1e1)},
}


@dataclass
class TrialResult:
    index: int
    params: dict
    fold_accuracies: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    error: str | None = None

    @property
    def mean(self) -> float:
        if self.error is not None or not self.fold_accuracies:
            return math.nan
        return sum(self.fold_accuracies) / len(self.fold_accuracies)

    @property
    def failed(self) -> bool:
        return self.error is not None


def kfold_indices(n: int, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Shuffle ``0..n-1`` then cut it into ``k`` validation folds (first ``n % k`` get one extra)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise KTooLargeError(f"k={k} exceeds n={n}")
    perm = np.asarray(permutation(n, seed, _KFOLD), dtype=np.int64)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for f in range(k):
        stop = start + base + (1 if f < extra else 0)
        val = np.sort(perm[start:stop])
        train = np.sort(np.concatenate([perm[:start], perm[stop:]]))
        folds.append((train, val))
        start = stop
    return folds


def _evaluate(kind: str, params: dict, X, y, folds, seed: int) -> list[float]:
    accs = []
    for train, val in folds:
        if kind == "nb":
            model = nb_fit(X[train], y[train], alpha=params["alpha"])
            pred = nb_predict_matrix(model, X[val])
        elif kind == "svm":
            opts = TrainOptions(seed=seed, **{k: params[k] for k in ("tolerance", "max_iterations") if k in params})
            model = svm_fit(X[train], y[train], c_param=params["c"], options=opts)
            pred = svm_predict_matrix(model, X[val])
        else:
            raise ValueError(f"unknown model kind {kind!r}")
        accs.append(float((pred == y[val]).mean()))
    return accs


def _sample(space: SearchSpace, rng: SplitMix64) -> dict:
    # sorted keys keep the draw order independent of dict construction
    return {name: space[name].sample(rng) for name in sorted(space)}


def grid_points(space: SearchSpace) -> list[dict]:
    """Every combination of a space made only of :class:`Choice` ranges."""
    names = sorted(space)
    for name in names:
        if not isinstance(space[name], Choice):
            raise ValueError(f"grid search needs finite choice sets; {name} is {space[name].describe()}")
    return [dict(zip(names, combo)) for combo in itertools.product(*(space[n].options for n in names))]


def run_search(matrix, labels, kind: str, space: SearchSpace | None = None, trials: int = 25,
               k: int = 5, seed: int = 0, grid: bool = False,
               fixed: dict | None = None) -> tuple[TrialResult, list[TrialResult]]:
    """Seeded random search (or grid search) scored by k-fold CV accuracy.

    The folds are computed once so every trial sees the same splits. A trial
    whose training raises is logged as failed; the search carries on. The
    best trial has the highest mean accuracy, ties going to the lower index.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    space = DEFAULT_SPACES[kind] if space is None else space
    X = as_csr(matrix)
    y = labels_array(labels)
    folds = kfold_indices(X.shape[0], k, seed)

    if grid:
        settings = grid_points(space)
    else:
        settings = [_sample(space, SplitMix64.stream(seed, _TRIALS, t)) for t in range(trials)]

    log = []
    for t, params in enumerate(settings):
        params = {**(fixed or {}), **params}
        result = TrialResult(t, params)
        start = time.perf_counter()
        try:
            result.fold_accuracies = _evaluate(kind, params, X, y, folds, seed)
        except Exception as exc:  # noqa: BLE001
            result.error = f"{type(exc).__name__}: {exc}"
            result.fold_accuracies = []
        result.wall_time = time.perf_counter() - start
        log.append(result)

    ok = [r for r in log if not r.failed]
    if not ok:
        raise RuntimeError(f"all {len(log)} trials failed; first error: {log[0].error}")
    best = max(ok, key=lambda r: (r.mean, -r.index))
    return best, log


def search_log_rows(log: Sequence[TrialResult], k: int) -> tuple[list[str], list[list[str]]]:
    names = sorted({p for r in log for p in r.params})
    header = ["trial", *names, *(f"fold{i + 1}" for i in range(k)), "mean", "status"]
    rows = []
    for r in log:
        folds = [repr(a) for a in r.fold_accuracies] + [""] * (k - len(r.fold_accuracies))
        rows.append([str(r.index), *(repr(r.params.get(n, "")) for n in names), *folds,
                     "" if r.failed else repr(r.mean), r.error or "ok"])
    return header, rows
