import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from langbias.corpus import Corpus, Document, Language, Sentiment  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def random_corpus(rng: np.random.Generator, sizes, vocab=("a", "b", "c", "d", "e"), domain="music"):
    """Corpus with ``sizes[i]`` documents in subgroup i (En+, En-, Fr+, Fr-), shuffled."""
    docs = []
    groups = [(Language.ENGLISH, Sentiment.POSITIVE), (Language.ENGLISH, Sentiment.NEGATIVE),
              (Language.FRENCH, Sentiment.POSITIVE), (Language.FRENCH, Sentiment.NEGATIVE)]
    for (lang, sent), n in zip(groups, sizes):
        for _ in range(n):
            k = int(rng.integers(1, len(vocab) + 1))
            terms = rng.choice(len(vocab), size=k, replace=False)
            docs.append(((lang, sent), tuple((vocab[t], int(rng.integers(1, 4))) for t in sorted(terms))))
    order = rng.permutation(len(docs))
    out = [Document(f"doc{i}", docs[j][1], docs[j][0][1], docs[j][0][0], domain) for i, j in enumerate(order)]
    return Corpus(tuple(out))


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# -- acceptance summary -------------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    number, title = marker
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        detail = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2].removeprefix("Skipped: ")
        _ACCEPTANCE[number] = (title, outcome, detail)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("acceptance")
    if m is not None:
        rep.acceptance = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcome, detail = _ACCEPTANCE[number]
        line = f"[{outcome}] {number:>2}. {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
