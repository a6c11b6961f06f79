"""End-to-end experiment: load, preprocess, balance, split, vectorize, train, audit."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__, report
from .config import RunConfig
from .corpus import SUBGROUPS, Corpus, CorpusFormatError, Language, load_corpus, subgroup_counts
from .features import LOG_BASE, fit_tfidf, transform_matrix
from .metrics import (EorVariant, FairnessReport, LabeledPredictions, PerformanceReport,
                      fairness_report, sliced_report)
from .models import TrainOptions, nb_fit, nb_predict_matrix, svm_fit, svm_predict_matrix
from .preprocess import PreprocessConfig, default_stopwords, preprocess, read_stopwords
from .sampling import PRNG_ID, BalanceReport, SplitSpec, balance, split

MODEL_NAMES = {"nb": "Multinomial Naive Bayes", "svm": "Linear SVM"}


class StageError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it for the diagnostic."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


@dataclass
class ModelResult:
    kind: str
    predictions: LabeledPredictions
    performance: dict[str, PerformanceReport]
    fairness: FairnessReport
    model: object = None


@dataclass
class DomainResult:
    domain: str
    balance: BalanceReport
    n_train: int
    n_test: int
    train_counts: dict
    test_counts: dict
    tfidf: object = None
    models: dict[str, ModelResult] = field(default_factory=dict)


def preprocess_config(cfg: RunConfig) -> PreprocessConfig:
    lists = {}
    if cfg.stopwords == "default":
        lists = {lang: default_stopwords(lang) for lang in Language}
    for lang, path in ((Language.ENGLISH, cfg.stopwords_en), (Language.FRENCH, cfg.stopwords_fr)):
        if path:
            lists[lang] = read_stopwords(path)
    if cfg.lowercase:
        lists = {k: frozenset(w.lower() for w in v) for k, v in lists.items()}
    return PreprocessConfig(lowercase=cfg.lowercase, stopword_lists=lists,
                            min_term_length=cfg.min_term_length)


def load_domain(cfg: RunConfig, domain: str) -> Corpus:
    parts = []
    for src in cfg.data:
        if src.domain != domain:
            continue
        try:
            parts.append(load_corpus(src.path, src.language, src.domain))
        except CorpusFormatError as exc:
            raise StageError("load", str(exc)) from None
        except OSError as exc:
            raise StageError("load", f"cannot read {src.path}: {exc.strerror}") from None
    return Corpus.concat(parts)


def run_domain(cfg: RunConfig, domain: str, corpus: Corpus | None = None) -> DomainResult:
    """Run every configured model on one domain; pure given (cfg, data)."""
    if corpus is None:
        corpus = load_domain(cfg, domain)
    try:
        corpus = preprocess(corpus, preprocess_config(cfg))
    except Exception as exc:
        raise StageError("preprocess", str(exc)) from exc
    try:
        balanced, breport = balance(corpus, cfg.seed)
        breport.domain = domain
    except ValueError as exc:
        raise StageError("balance", str(exc)) from None
    try:
        train, test = split(balanced, SplitSpec(seed=cfg.seed, train_fraction=cfg.train_fraction))
    except ValueError as exc:
        raise StageError("split", str(exc)) from None
    try:
        tfidf = fit_tfidf(train)
        X_train, X_test = transform_matrix(tfidf, train), transform_matrix(tfidf, test)
    except ValueError as exc:
        raise StageError("features", str(exc)) from None
    y_train = np.array([int(d.label) for d in train])
    y_test = np.array([int(d.label) for d in test])
    g_test = np.array([int(d.language) for d in test])

    result = DomainResult(domain, breport, len(train), len(test),
                          subgroup_counts(train), subgroup_counts(test), tfidf)
    for kind in cfg.models:
        try:
            if kind == "nb":
                model = nb_fit(X_train, y_train, alpha=cfg.alpha)
                pred = nb_predict_matrix(model, X_test)
            else:
                opts = TrainOptions(tolerance=cfg.svm_tolerance, max_iterations=cfg.svm_max_iterations,
                                    seed=cfg.seed)
                model = svm_fit(X_train, y_train, c_param=cfg.c, options=opts)
                pred = svm_predict_matrix(model, X_test)
        except (ValueError, ArithmeticError) as exc:
            raise StageError(f"train:{kind}", str(exc)) from None
        try:
            p = LabeledPredictions(y_test, pred, g_test)
            perf = sliced_report(p)
            fair = fairness_report(p, EorVariant(cfg.eor_variant))
        except ValueError as exc:
            raise StageError(f"evaluate:{kind}", str(exc)) from None
        result.models[kind] = ModelResult(kind, p, perf, fair, model)
    return result


def config_digest(cfg: RunConfig) -> str:
    text = "\n".join(f"{k}={v}" for k, v in cfg.to_items())
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def run_meta(cfg: RunConfig, domain: str | None = None) -> dict[str, str]:
    meta = {
        "seed.balance": str(cfg.seed),
        "seed.split": str(cfg.seed),
        "seed.svm_order": str(cfg.seed),
        "prng": PRNG_ID,
        "eor_variant": cfg.eor_variant,
        "config_sha256": config_digest(cfg),
    }
    if domain is not None:
        meta["domain"] = domain
    return meta


def _split_items(res: DomainResult) -> list[tuple[str, str]]:
    items = [("split.train", str(res.n_train)), ("split.test", str(res.n_test))]
    for lang, sent in SUBGROUPS:
        items.append((f"split.train.{lang.code}.{sent.word}", str(res.train_counts[(lang, sent)])))
        items.append((f"split.test.{lang.code}.{sent.word}", str(res.test_counts[(lang, sent)])))
    return items


def write_domain(cfg: RunConfig, res: DomainResult, outdir: str) -> list[list[str]]:
    """Write all artifacts of one domain; returns its ``summary.csv`` rows."""
    os.makedirs(outdir, exist_ok=True)
    header = report.run_header(run_meta(cfg, res.domain)) + cfg.to_items()
    dev = report.deviations_block("none", EorVariant(cfg.eor_variant).note)
    text_head = "".join(f"# {k} = {v}\n" for k, v in header) + "\n" + dev + "\n"

    report.write_kv(os.path.join(outdir, "balance.kv"),
                    header + res.balance.to_items() + _split_items(res), "balance")
    with open(os.path.join(outdir, "balance.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text_head + res.balance.to_text())
    res.tfidf.save(os.path.join(outdir, "tfidf.model"))

    rows = []
    for kind, mr in res.models.items():
        perf_items = []
        for name, rep in mr.performance.items():
            perf_items += rep.to_items(prefix=name.lower() + ".")
        report.write_kv(os.path.join(outdir, f"performance_{kind}.kv"),
                        header + [("model", kind)] + perf_items, f"performance {kind}")
        fair_items = mr.fairness.to_items()
        report.write_kv(os.path.join(outdir, f"fairness_{kind}.kv"),
                        header + [("model", kind)] + fair_items, f"fairness {kind}")

        perf_vals = report.perf_from_kv(dict(perf_items))
        with open(os.path.join(outdir, f"performance_{kind}.txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text_head)
            fh.write(f"{MODEL_NAMES[kind]} performance ({res.n_test} test reviews)\n\n")
            fh.write(report.format_table(report.PERF_HEADER, report.performance_rows(res.domain, perf_vals)))
        fair_vals = report.floats(dict(fair_items))
        with open(os.path.join(outdir, f"fairness_{kind}.txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text_head)
            fh.write(f"{MODEL_NAMES[kind]} fairness, sensitive feature = language\n")
            fh.write(f"{mr.fairness.definitions_note}\n\n")
            fh.write(report.fairness_tables([(res.domain, fair_vals)]))
            fh.write("\n" + report.group_rate_table(fair_vals))
        mr.model.save(os.path.join(outdir, f"{kind}.model"))

        perf = mr.performance
        f = mr.fairness
        rows.append([
            res.domain, kind, str(res.balance.total), str(res.n_train), str(res.n_test),
            repr(perf["Overall"].accuracy), repr(perf["English"].accuracy), repr(perf["French"].accuracy),
            repr(perf["Overall"].weighted("precision")), repr(perf["Overall"].weighted("recall")),
            repr(perf["Overall"].weighted("f1")), repr(perf["Overall"].macro("f1")),
            repr(f.dpd), repr(f.dpr), repr(f.eod), repr(f.eor), f.variant.value,
            str(cfg.seed), LOG_BASE, __version__, config_digest(cfg),
        ])
    return rows


SUMMARY_HEADER = [
    "domain", "model", "balanced", "train", "test",
    "accuracy", "accuracy_en", "accuracy_fr", "precision_weighted", "recall_weighted",
    "f1_weighted", "f1_macro", "dpd", "dpr", "eod", "eor", "eor_variant",
    "seed", "tfidf_log_base", "toolkit_version", "config_sha256",
]


def _run_and_write(cfg: RunConfig, domain: str, outdir: str) -> list[list[str]]:
    return write_domain(cfg, run_domain(cfg, domain), outdir)


def run_all(cfg: RunConfig, domains: list[str], jobs: int = 1) -> str:
    """Run ``domains`` (in parallel when ``jobs > 1``) and write ``summary.csv``."""
    os.makedirs(cfg.out, exist_ok=True)
    report.write_kv(os.path.join(cfg.out, "resolved_config.kv"),
                    report.run_header(run_meta(cfg)) + cfg.to_items(include_out=True), "resolved config")
    outdirs = {d: os.path.join(cfg.out, d) for d in domains}
    if jobs > 1 and len(domains) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {d: pool.submit(_run_and_write, cfg, d, outdirs[d]) for d in domains}
            per_domain = {d: futures[d].result() for d in domains}
    else:
        per_domain = {d: _run_and_write(cfg, d, outdirs[d]) for d in domains}
    rows = [r for d in domains for r in per_domain[d]]
    path = os.path.join(cfg.out, "summary.csv")
    report.write_csv(path, SUMMARY_HEADER, rows)
    return path
