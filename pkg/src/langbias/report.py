"""Serialization of run artifacts: key-value files, text tables and CSV summaries.

Key-value files are UTF-8 lines ``key = value``; lines starting with ``#``
are comments. Floats are written with ``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import math
import os
from typing import Iterable, Mapping, Sequence

from . import __version__
from .features import LOG_BASE

PERF_ROWS = ("Overall", "English", "French")

DEVIATIONS = (
    "no lemmatization or named-entity filtering (extra term filters: {filters})",
    "TF-IDF: tf = count / document mass, idf = ln(N / df); no smoothing, no row normalization",
    "equalized odds ratio variant: {eor}",
    "SVM: linear kernel only; bias learned as a regularized constant feature",
    "hyperparameter search: seeded random/grid search, not TPE",
)


def write_kv(path: str | os.PathLike, items: Iterable[tuple[str, str]], title: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# langbias {__version__}{' ' + title if title else ''}\n")
        for key, value in items:
            if "\n" in value or " = " in key:
                raise ValueError(f"unserializable key-value pair {key!r}")
            fh.write(f"{key} = {value}\n")


def read_kv(path: str | os.PathLike) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            key, sep, value = line.partition(" = ")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            out[key] = value
    return out


def run_header(meta: Mapping[str, str]) -> list[tuple[str, str]]:
    """Provenance entries shared by every output file of a run."""
    items = [("meta.toolkit_version", __version__), ("meta.tfidf_log_base", LOG_BASE)]
    items += [(f"meta.{k}", v) for k, v in meta.items()]
    return items


def deviations_block(filters: str, eor_note: str) -> str:
    lines = ["Pipeline deviations:"]
    lines += ["  - " + d.format(filters=filters, eor=eor_note) for d in DEVIATIONS]
    return "\n".join(lines) + "\n"


def _num(x: float, digits: int) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "n/a"
    return f"{x:.{digits}f}"


def format_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    out = []
    for r in [header, *rows]:
        cells = [str(c).ljust(w) if i == 0 else str(c).rjust(w) for i, (c, w) in enumerate(zip(r, widths))]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


_DISPLAY = {"dvd": "DVDs", "books": "Books", "music": "Music"}


def display_domain(domain: str) -> str:
    return _DISPLAY.get(domain, domain.title())


def performance_rows(domain: str, perf: Mapping[str, Mapping[str, float]]) -> list[list[str]]:
    """``perf[slice]`` maps metric names (accuracy, weighted.precision, ...) to floats."""
    rows = []
    for name in PERF_ROWS:
        m = perf[name]
        label = f"{display_domain(domain)} Overall" if name == "Overall" else f"{display_domain(domain)} ({name})"
        rows.append([label, _num(m["accuracy"], 3),
                     _num(m["weighted.precision"], 2), _num(m["weighted.recall"], 2), _num(m["weighted.f1"], 2),
                     _num(m["macro.precision"], 2), _num(m["macro.recall"], 2), _num(m["macro.f1"], 2)])
    return rows


PERF_HEADER = ("Dataset", "Accuracy", "Precision", "Recall", "F1-Score", "Macro-P", "Macro-R", "Macro-F1")
RATIO_HEADER = ("Dataset", "Demographic Parity Ratio", "Equalized Odds Ratio")
DIFF_HEADER = ("Dataset", "Demographic Parity Difference", "Equalized Odds Difference")


def fairness_tables(rows: Sequence[tuple[str, Mapping[str, float]]]) -> str:
    ratio = [[display_domain(d), _num(m["demographic_parity_ratio"], 3), _num(m["equalized_odds_ratio"], 3)]
             for d, m in rows]
    diff = [[display_domain(d), _num(m["demographic_parity_difference"], 3), _num(m["equalized_odds_difference"], 3)]
            for d, m in rows]
    return format_table(RATIO_HEADER, ratio) + "\n" + format_table(DIFF_HEADER, diff)


def group_rate_table(m: Mapping[str, float]) -> str:
    rows = []
    for code, name in (("en", "English"), ("fr", "French")):
        rows.append([name, str(int(m[f"{code}.n"])), _num(m[f"{code}.selection_rate"], 4),
                     _num(m[f"{code}.tpr"], 4), _num(m[f"{code}.fpr"], 4)])
    return format_table(("Group", "n", "Selection rate", "TPR", "FPR"), rows)


def floats(kv: Mapping[str, str]) -> dict[str, float]:
    out = {}
    for k, v in kv.items():
        try:
            out[k] = float(v)
        except ValueError:
            continue
    return out


def perf_from_kv(kv: Mapping[str, str]) -> dict[str, dict[str, float]]:
    vals = floats(kv)
    out = {}
    for name in PERF_ROWS:
        prefix = name.lower() + "."
        out[name] = {k[len(prefix):]: v for k, v in vals.items() if k.startswith(prefix)}
    return out


def write_csv(path: str | os.PathLike, header: Sequence[str], rows: Iterable[Sequence[str]],
              comments: Sequence[str] = ()) -> None:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_csv(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
