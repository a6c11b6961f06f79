"""Classification performance and group-fairness metrics.

Sentiment is binary with POSITIVE as the positive class (1); the sensitive
attribute is review language. Group-conditional rates that have no base
(e.g. a TPR for a group with no true positives) are NaN with a flag rather
than an error, and the fairness metrics built on them are undefined.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import Language, Sentiment

GROUPS = (Language.ENGLISH, Language.FRENCH)


class EmptyGroupError(ValueError):
    pass


class UndefinedRateError(ValueError):
    pass


class EorVariant(str, enum.Enum):
    PAPER_PRODUCT = "paper"
    MIN_COMPONENT = "min"

    @property
    def note(self) -> str:
        if self is EorVariant.PAPER_PRODUCT:
            return "EOR = [min(TPR)/max(TPR)] * [min(FPR)/max(FPR)] (product of ratios)"
        return "EOR = min(min(TPR)/max(TPR), min(FPR)/max(FPR)) (smaller ratio)"


@dataclass
class LabeledPredictions:
    y_true: np.ndarray
    y_pred: np.ndarray
    group: np.ndarray

    def __post_init__(self):
        self.y_true = np.asarray([int(v) for v in self.y_true], dtype=np.int64)
        self.y_pred = np.asarray([int(v) for v in self.y_pred], dtype=np.int64)
        self.group = np.asarray([int(v) for v in self.group], dtype=np.int64)
        n = len(self.y_true)
        if n == 0 or len(self.y_pred) != n or len(self.group) != n:
            raise ValueError("y_true, y_pred and group must be non-empty and aligned")

    def __len__(self) -> int:
        return len(self.y_true)

    def subset(self, mask: np.ndarray) -> "LabeledPredictions":
        return LabeledPredictions(self.y_true[mask], self.y_pred[mask], self.group[mask])


@dataclass
class GroupStats:
    n: int
    n_pos_true: int
    n_neg_true: int
    n_pred_pos: int
    tp: int
    fp: int

    @property
    def selection_rate(self) -> float:
        return self.n_pred_pos / self.n

    @property
    def tpr_defined(self) -> bool:
        return self.n_pos_true > 0

    @property
    def fpr_defined(self) -> bool:
        return self.n_neg_true > 0

    @property
    def tpr(self) -> float:
        return self.tp / self.n_pos_true if self.n_pos_true else math.nan

    @property
    def fpr(self) -> float:
        return self.fp / self.n_neg_true if self.n_neg_true else math.nan


@dataclass
class GroupRates:
    groups: dict[Language, GroupStats]

    def pair(self, attr: str) -> tuple[float, float]:
        a, b = GROUPS
        return getattr(self.groups[a], attr), getattr(self.groups[b], attr)


def group_rates(p: LabeledPredictions, groups: Sequence[Language] = GROUPS) -> GroupRates:
    out = {}
    for g in groups:
        m = p.group == int(g)
        n = int(m.sum())
        if n == 0:
            raise EmptyGroupError(f"group {Language(g).title} has no rows")
        t, y = p.y_true[m], p.y_pred[m]
        out[Language(g)] = GroupStats(
            n=n,
            n_pos_true=int((t == 1).sum()),
            n_neg_true=int((t == 0).sum()),
            n_pred_pos=int((y == 1).sum()),
            tp=int(((t == 1) & (y == 1)).sum()),
            fp=int(((t == 0) & (y == 1)).sum()),
        )
    return GroupRates(out)


def _min_max_ratio(a: float, b: float) -> float:
    lo, hi = min(a, b), max(a, b)
    if hi == 0.0:
        return 1.0
    return lo / hi


def _require(r: GroupRates, *flags: str) -> None:
    for g, s in r.groups.items():
        for flag in flags:
            if not getattr(s, flag):
                raise UndefinedRateError(f"{flag[:3].upper()} undefined for {g.title}")


def demographic_parity_difference(r: GroupRates) -> float:
    a, b = r.pair("selection_rate")
    return abs(a - b)


def demographic_parity_ratio(r: GroupRates) -> float:
    return _min_max_ratio(*r.pair("selection_rate"))


def equalized_odds_difference(r: GroupRates) -> float:
    _require(r, "tpr_defined", "fpr_defined")
    ta, tb = r.pair("tpr")
    fa, fb = r.pair("fpr")
    return max(abs(ta - tb), abs(fa - fb))


def equalized_odds_ratio(r: GroupRates, variant: EorVariant | str = EorVariant.PAPER_PRODUCT) -> float:
    variant = EorVariant(variant)
    _require(r, "tpr_defined", "fpr_defined")
    tpr_ratio = _min_max_ratio(*r.pair("tpr"))
    fpr_ratio = _min_max_ratio(*r.pair("fpr"))
    if variant is EorVariant.PAPER_PRODUCT:
        return tpr_ratio * fpr_ratio
    return min(tpr_ratio, fpr_ratio)


@dataclass
class FairnessReport:
    dpd: float
    dpr: float
    eod: float
    eor: float
    rates: GroupRates
    variant: EorVariant
    eo_defined: bool = True

    @property
    def definitions_note(self) -> str:
        return self.variant.note

    def to_items(self) -> list[tuple[str, str]]:
        items = [
            ("demographic_parity_difference", _fmt(self.dpd)),
            ("demographic_parity_ratio", _fmt(self.dpr)),
            ("equalized_odds_difference", _fmt(self.eod)),
            ("equalized_odds_ratio", _fmt(self.eor)),
            ("equalized_odds_defined", str(self.eo_defined).lower()),
            ("eor_variant", self.variant.value),
            ("definitions_note", self.definitions_note),
        ]
        for g, s in self.rates.groups.items():
            k = g.code
            items += [
                (f"{k}.n", str(s.n)),
                (f"{k}.selection_rate", _fmt(s.selection_rate)),
                (f"{k}.tpr", _fmt(s.tpr)),
                (f"{k}.tpr_defined", str(s.tpr_defined).lower()),
                (f"{k}.fpr", _fmt(s.fpr)),
                (f"{k}.fpr_defined", str(s.fpr_defined).lower()),
            ]
        return items


def fairness_report(p: LabeledPredictions, variant: EorVariant | str = EorVariant.PAPER_PRODUCT) -> FairnessReport:
    variant = EorVariant(variant)
    r = group_rates(p)
    try:
        eod = equalized_odds_difference(r)
        eor = equalized_odds_ratio(r, variant)
        defined = True
    except UndefinedRateError:
        eod = eor = math.nan
        defined = False
    return FairnessReport(demographic_parity_difference(r), demographic_parity_ratio(r),
                          eod, eor, r, variant, defined)


@dataclass
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int
    zero_division: bool = False


@dataclass
class PerformanceReport:
    tp: int
    fp: int
    tn: int
    fn: int
    per_class: dict[Sentiment, ClassScores] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.n

    def _avg(self, attr: str, weighted: bool) -> float:
        scores = [self.per_class[c] for c in Sentiment]
        if weighted:
            total = sum(s.support for s in scores)
            if total == 0:
                return 0.0
            return sum(getattr(s, attr) * s.support for s in scores) / total
        return sum(getattr(s, attr) for s in scores) / len(scores)

    def macro(self, attr: str) -> float:
        return self._avg(attr, weighted=False)

    def weighted(self, attr: str) -> float:
        return self._avg(attr, weighted=True)

    def to_items(self, prefix: str = "") -> list[tuple[str, str]]:
        items = [
            (f"{prefix}n", str(self.n)),
            (f"{prefix}accuracy", _fmt(self.accuracy)),
            (f"{prefix}tp", str(self.tp)), (f"{prefix}fp", str(self.fp)),
            (f"{prefix}tn", str(self.tn)), (f"{prefix}fn", str(self.fn)),
        ]
        for agg in ("weighted", "macro"):
            for attr in ("precision", "recall", "f1"):
                items.append((f"{prefix}{agg}.{attr}", _fmt(getattr(self, agg)(attr))))
        for c in Sentiment:
            s = self.per_class[c]
            for attr in ("precision", "recall", "f1"):
                items.append((f"{prefix}{c.word}.{attr}", _fmt(getattr(s, attr))))
            items.append((f"{prefix}{c.word}.support", str(s.support)))
            items.append((f"{prefix}{c.word}.zero_division", str(s.zero_division).lower()))
        return items


def _prf(tp: int, fp: int, fn: int) -> ClassScores:
    zero = False
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision, zero = 0.0, True
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        recall, zero = 0.0, True
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return ClassScores(precision, recall, f1, tp + fn, zero)


def performance_report(y_true, y_pred) -> PerformanceReport:
    t = np.asarray([int(v) for v in y_true], dtype=np.int64)
    y = np.asarray([int(v) for v in y_pred], dtype=np.int64)
    if len(t) == 0 or len(t) != len(y):
        raise ValueError("y_true and y_pred must be non-empty and aligned")
    tp = int(((t == 1) & (y == 1)).sum())
    fp = int(((t == 0) & (y == 1)).sum())
    tn = int(((t == 0) & (y == 0)).sum())
    fn = int(((t == 1) & (y == 0)).sum())
    per_class = {
        Sentiment.POSITIVE: _prf(tp, fp, fn),
        Sentiment.NEGATIVE: _prf(tn, fn, fp),
    }
    return PerformanceReport(tp, fp, tn, fn, per_class)


def sliced_report(p: LabeledPredictions) -> dict[str, PerformanceReport]:
    """Reports keyed ``"Overall"``, ``"English"``, ``"French"``."""
    out = {"Overall": performance_report(p.y_true, p.y_pred)}
    for g in GROUPS:
        m = p.group == int(g)
        if not m.any():
            raise EmptyGroupError(f"group {g.title} has no rows")
        out[g.title] = performance_report(p.y_true[m], p.y_pred[m])
    return out


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else repr(float(x))
