"""Command-line interface: ``langbias {inspect,balance,run,tune,report}``."""

from __future__ import annotations

import argparse
import glob
import os
import sys

import numpy as np

from . import __version__, report
from .config import ConfigError, DataSource, RunConfig, build_config
from .corpus import SUBGROUPS, Corpus, CorpusFormatError, Language, load_corpus, subgroup_counts, write_cache
from .features import fit_tfidf, transform_matrix
from .metrics import EorVariant
from .pipeline import StageError, load_domain, run_meta, preprocess_config, run_all
from .preprocess import preprocess
from .sampling import SplitSpec, balance, split
from .tuning import DEFAULT_SPACES, run_search, search_log_rows

EXIT_STAGE = 1
EXIT_USAGE = 2

_DOMAIN_DIRS = {"books", "dvd", "music"}


def _print_subgroups(counts, out=sys.stdout):
    rows = [[f"{lang.title} {sent.word}", str(counts[(lang, sent)])] for lang, sent in SUBGROUPS]
    rows.append(["total", str(sum(counts.values()))])
    out.write(report.format_table(("subgroup", "reviews"), rows))


def _guess_source(spec: str) -> DataSource:
    head = spec.split(":", 1)[0].lower()
    if head in ("en", "fr", "english", "french") and spec.count(":") >= 2:
        return DataSource.parse(spec)
    parts = os.path.normpath(spec).split(os.sep)
    lang = next((p for p in reversed(parts) if p in ("en", "fr")), None)
    if lang is None:
        raise ConfigError(f"cannot infer the language of {spec}; pass it as LANG:DOMAIN:PATH")
    domain = next((p for p in reversed(parts) if p in _DOMAIN_DIRS), "unknown")
    return DataSource(Language.parse(lang), domain, spec)


def cmd_inspect(args) -> int:
    sources = [_guess_source(s) for s in args.paths]
    corpora = []
    for src in sources:
        try:
            c = load_corpus(src.path, src.language, src.domain)
        except CorpusFormatError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_STAGE
        except OSError as exc:
            print(f"error: cannot read {src.path}: {exc.strerror}", file=sys.stderr)
            return EXIT_STAGE
        counts = subgroup_counts(c)
        pos = sum(v for (_, s), v in counts.items() if s == 1)
        print(f"{src.path}  [{src.language.code}/{src.domain}]  reviews={len(c)}  "
              f"positive={pos}  negative={len(c) - pos}")
        corpora.append(c)
    print()
    _print_subgroups(subgroup_counts(Corpus.concat(corpora)))
    return 0


def _config_from_args(args) -> RunConfig:
    files = ([args.config] if args.config else []) + ([args.params] if getattr(args, "params", None) else [])
    overrides = {
        "seed": args.seed, "model": args.model, "alpha": args.alpha, "c": args.c,
        "train_fraction": args.train_fraction, "eor_variant": args.eor_variant, "out": args.out,
    }
    for key in ("trials", "folds"):
        overrides[key] = getattr(args, key, None)
    cfg = build_config(files, overrides)
    if args.data:
        cfg.data = [DataSource.parse(s) for s in args.data]
    if not cfg.data:
        raise ConfigError("no data sources; use --config or --data LANG:DOMAIN:PATH")
    return cfg.validate()


def _domains(cfg: RunConfig, args) -> list[str]:
    if getattr(args, "domain", None):
        if args.domain not in cfg.domains:
            raise ConfigError(f"domain {args.domain!r} not configured; have {', '.join(cfg.domains)}")
        return [args.domain]
    return cfg.domains


def cmd_balance(args) -> int:
    cfg = _config_from_args(args)
    os.makedirs(cfg.out, exist_ok=True)
    for domain in _domains(cfg, args):
        corpus = preprocess(load_domain(cfg, domain), preprocess_config(cfg))
        try:
            balanced, rep = balance(corpus, cfg.seed)
        except ValueError as exc:
            raise StageError("balance", str(exc)) from None
        rep.domain = domain
        outdir = os.path.join(cfg.out, domain)
        os.makedirs(outdir, exist_ok=True)
        header = report.run_header(run_meta(cfg, domain)) + cfg.to_items()
        report.write_kv(os.path.join(outdir, "balance.kv"), header + rep.to_items(), "balance")
        with open(os.path.join(outdir, "balance.txt"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(f"# {k} = {v}\n" for k, v in header) + "\n" + rep.to_text())
        write_cache(balanced, os.path.join(outdir, "balanced.cache"))
        sys.stdout.write(rep.to_text())
    return 0


def cmd_run(args) -> int:
    cfg = _config_from_args(args)
    domains = _domains(cfg, args)
    jobs = args.jobs or (len(domains) if args.all_domains else 1)
    path = run_all(cfg, domains, jobs=jobs)
    for row in report.read_csv(path):
        print(f"{row['domain']:<8} {row['model']:<4} accuracy={float(row['accuracy']):.3f} "
              f"(en {float(row['accuracy_en']):.3f}, fr {float(row['accuracy_fr']):.3f})  "
              f"DPR={float(row['dpr']):.3f} EOR={float(row['eor']):.3f}")
    print(f"wrote {cfg.out}")
    return 0


def cmd_tune(args) -> int:
    cfg = _config_from_args(args)
    domains = _domains(cfg, args)
    if len(domains) != 1:
        raise ConfigError("tune works on one domain; pass --domain")
    domain = domains[0]
    corpus = preprocess(load_domain(cfg, domain), preprocess_config(cfg))
    try:
        balanced, _ = balance(corpus, cfg.seed)
    except ValueError as exc:
        raise StageError("balance", str(exc)) from None
    train, _ = split(balanced, SplitSpec(seed=cfg.seed, train_fraction=cfg.train_fraction))
    X = transform_matrix(fit_tfidf(train), train)
    y = np.array([int(d.label) for d in train])

    os.makedirs(cfg.out, exist_ok=True)
    header = report.run_header(run_meta(cfg, domain)) + cfg.to_items()
    best_params = {}
    for kind in cfg.models:
        space = DEFAULT_SPACES[kind]
        fixed = {"tolerance": cfg.svm_tolerance, "max_iterations": cfg.svm_max_iterations} if kind == "svm" else {}
        try:
            best, log = run_search(X, y, kind, space, trials=cfg.trials, k=cfg.folds, seed=cfg.seed, fixed=fixed)
        except (ValueError, RuntimeError) as exc:
            raise StageError(f"tune:{kind}", str(exc)) from None
        head, rows = search_log_rows(log, cfg.folds)
        comments = [f"{k} = {v}" for k, v in header]
        comments += [f"search.{name} = {rng.describe()}" for name, rng in space.items()]
        comments += [f"search.trials = {cfg.trials}", f"search.folds = {cfg.folds}", "search.sampler = random"]
        report.write_csv(os.path.join(cfg.out, f"tune_{kind}.csv"), head, rows, comments)
        key = "alpha" if kind == "nb" else "c"
        best_params[key] = best.params[key]
        print(f"{kind}: best trial {best.index} {key}={best.params[key]:.6g} "
              f"mean CV accuracy {best.mean:.4f} over {len(log)} trials")

    with open(os.path.join(cfg.out, "best_params.toml"), "w", encoding="utf-8", newline="\n") as fh:
        for k, v in header:
            fh.write(f"# {k} = {v}\n")
        for k, v in best_params.items():
            fh.write(f"{k} = {v!r}\n")
    print(f"wrote {cfg.out}")
    return 0


def cmd_report(args) -> int:
    perf_files = sorted(glob.glob(os.path.join(args.dir, "**", "performance_*.kv"), recursive=True))
    if not perf_files:
        print(f"error: no performance_*.kv files under {args.dir}", file=sys.stderr)
        return EXIT_STAGE
    by_model: dict[str, list] = {}
    for path in perf_files:
        kv = report.read_kv(path)
        kind = kv["model"]
        fair = report.read_kv(path.replace("performance_", "fairness_"))
        by_model.setdefault(kind, []).append((kv.get("meta.domain", "?"), kv, fair))
    out = []
    for kind in sorted(by_model):
        entries = by_model[kind]
        name = {"nb": "Naive Bayes", "svm": "SVM"}.get(kind, kind)
        rows = [r for domain, kv, _ in entries for r in report.performance_rows(domain, report.perf_from_kv(kv))]
        out.append(f"{name} Model Performance Metrics\n")
        out.append(report.format_table(report.PERF_HEADER, rows))
        variant = entries[0][2].get("definitions_note", "")
        out.append(f"\n{name} Fairness Across Datasets ({variant})\n")
        out.append(report.fairness_tables([(d, report.floats(f)) for d, _, f in entries]))
        out.append("\n")
    first = report.read_kv(perf_files[0])
    note = report.deviations_block("none", EorVariant(first.get("meta.eor_variant", "min")).note)
    text = "".join(out) + note
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="TOML run configuration")
    p.add_argument("--data", action="append", metavar="LANG:DOMAIN:PATH",
                   help="corpus file (repeatable; replaces the config's data list)")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--model", choices=("nb", "svm", "both"))
    p.add_argument("--alpha", type=float, metavar="F", help="Naive Bayes smoothing")
    p.add_argument("--c", type=float, metavar="F", help="SVM penalty parameter")
    p.add_argument("--train-fraction", type=float, metavar="F")
    p.add_argument("--eor-variant", choices=("paper", "min"))
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--domain", help="restrict to one configured domain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="langbias", description=__doc__)
    parser.add_argument("--version", action="version", version=f"langbias {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="summarize corpus files")
    p.add_argument("paths", nargs="+", metavar="[LANG:DOMAIN:]PATH")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("balance", help="balance language x sentiment subgroups")
    _add_run_options(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("run", help="train, evaluate and audit the classifiers")
    _add_run_options(p)
    p.add_argument("--params", metavar="PATH", help="best_params.toml written by 'tune'")
    p.add_argument("--all-domains", action="store_true", help="run every domain in parallel")
    p.add_argument("--jobs", type=int, metavar="N")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("tune", help="cross-validated hyperparameter search")
    _add_run_options(p)
    p.add_argument("--trials", type=int, metavar="N")
    p.add_argument("--folds", type=int, metavar="K")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("report", help="render tables from a run directory")
    p.add_argument("dir")
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
