"""Bag-of-words review corpora.

Reads the processed Webis-CLS-10 text format, where every line is one review
written as whitespace-separated ``token:count`` pairs plus a ``#label#`` pair
carrying ``positive`` or ``negative``.
"""

from __future__ import annotations

import enum
import os
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Iterable, Iterator

LABEL_TOKEN = "#label#"
LANG_TOKEN = "#lang#"
DOMAIN_TOKEN = "#domain#"


class Sentiment(enum.IntEnum):
    NEGATIVE = 0
    POSITIVE = 1

    @property
    def word(self) -> str:
        return self.name.lower()

    @classmethod
    def from_word(cls, word: str) -> "Sentiment":
        return cls[word.upper()]


class Language(enum.IntEnum):
    ENGLISH = 0
    FRENCH = 1

    @property
    def code(self) -> str:
        return ("en", "fr")[self]

    @property
    def title(self) -> str:
        return self.name.capitalize()

    @classmethod
    def parse(cls, value: "str | Language") -> "Language":
        if isinstance(value, Language):
            return value
        v = value.strip().lower()
        for lang in cls:
            if v in (lang.code, lang.name.lower()):
                return lang
        raise ValueError(f"unknown language {value!r}; expected one of en, fr")


SUBGROUPS: tuple[tuple[Language, Sentiment], ...] = (
    (Language.ENGLISH, Sentiment.POSITIVE),
    (Language.ENGLISH, Sentiment.NEGATIVE),
    (Language.FRENCH, Sentiment.POSITIVE),
    (Language.FRENCH, Sentiment.NEGATIVE),
)


class CorpusFormatError(ValueError):
    """A line of a corpus file violates the ``token:count`` format."""

    def __init__(self, message: str, line: str | None = None,
                 path: str | None = None, lineno: int | None = None):
        self.reason = message
        self.line = line
        self.path = path
        self.lineno = lineno
        super().__init__(self._render())

    def _render(self) -> str:
        where = ""
        if self.path is not None and self.lineno is not None:
            where = f"{self.path}:{self.lineno}: "
        elif self.lineno is not None:
            where = f"line {self.lineno}: "
        return where + self.reason

    def locate(self, path: str, lineno: int) -> "CorpusFormatError":
        self.path = path
        self.lineno = lineno
        self.args = (self._render(),)
        return self


class MissingLabelError(CorpusFormatError):
    pass


class MalformedPairError(CorpusFormatError):
    pass


class UnknownLabelError(CorpusFormatError):
    pass


class DuplicateLabelError(CorpusFormatError):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    terms: tuple[tuple[str, int], ...]
    label: Sentiment
    language: Language
    domain: str

    @property
    def mass(self) -> int:
        return sum(c for _, c in self.terms)

    def to_line(self, with_tags: bool = False) -> str:
        """Render the document back to the processed format."""
        parts = [f"{t}:{c}" for t, c in self.terms]
        parts.append(f"{LABEL_TOKEN}:{self.label.word}")
        if with_tags:
            parts.append(f"{LANG_TOKEN}:{self.language.code}")
            parts.append(f"{DOMAIN_TOKEN}:{self.domain}")
        return " ".join(parts)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = ()
    sources: tuple[str, ...] = ()
    loaded_at: str | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __getitem__(self, i):
        return self.documents[i]

    def with_documents(self, documents: Iterable[Document]) -> "Corpus":
        return Corpus(tuple(documents), self.sources, self.loaded_at)

    @classmethod
    def concat(cls, corpora: Iterable["Corpus"]) -> "Corpus":
        corpora = list(corpora)
        docs = tuple(d for c in corpora for d in c.documents)
        sources = tuple(s for c in corpora for s in c.sources)
        return cls(docs, sources, _now())


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _split_pair(pair: str) -> tuple[str, str]:
    token, sep, value = pair.rpartition(":")
    if not sep or not token:
        raise MalformedPairError(f"malformed pair {pair!r}")
    return token, value


def _parse_count(token: str, value: str) -> int:
    if not value.isdigit() or not value.isascii():
        raise MalformedPairError(f"count of {token!r} is not a positive integer: {value!r}")
    count = int(value)
    if count < 1:
        raise MalformedPairError(f"count of {token!r} is not a positive integer: {value!r}")
    return count


def _parse_pairs(line: str, tags: tuple[str, ...] = ()):
    counts: dict[str, int] = {}
    label = None
    tag_values: dict[str, str] = {}
    for pair in line.split():
        token, value = _split_pair(pair)
        if token == LABEL_TOKEN:
            if label is not None:
                raise DuplicateLabelError("more than one #label# pair", line)
            if value not in ("positive", "negative"):
                raise UnknownLabelError(f"unknown label value {value!r}", line)
            label = Sentiment.from_word(value)
        elif token in tags:
            tag_values[token] = value
        else:
            counts[token] = counts.get(token, 0) + _parse_count(token, value)
    if label is None:
        raise MissingLabelError("line has no #label# pair", line)
    return list(counts.items()), label, tag_values


def parse_line(line: str) -> tuple[list[tuple[str, int]], Sentiment]:
    """Parse one review line into ``(terms, label)``.

    Pairs split at their last colon, so tokens such as ``..`` or ``:)`` keep
    their own colons. Repeated tokens are merged by summing their counts, in
    first-occurrence order.

    >>> parse_line("really:1 funny:1 #label#:negative")
    ([('really', 1), ('funny', 1)], <Sentiment.NEGATIVE: 0>)
    """
    terms, label, _ = _parse_pairs(line)
    return terms, label


def _read_lines(path: str) -> Iterator[tuple[int, str]]:
    # newline="" keeps CRLF visible so we can strip it ourselves
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            yield lineno, raw.rstrip("\r\n")


def load_corpus(path: str | os.PathLike, language: Language | str, domain: str) -> Corpus:
    """Load one processed-format file, tagging every review with ``language`` and ``domain``.

    Blank lines are skipped. Document ids are ``<path>:<lineno>`` (1-based).
    Format errors are re-raised with the offending file and line attached.
    """
    language = Language.parse(language)
    path = os.fspath(path)
    docs = []
    for lineno, line in _read_lines(path):
        if not line.strip():
            continue
        try:
            terms, label = parse_line(line)
        except CorpusFormatError as exc:
            raise exc.locate(path, lineno) from None
        docs.append(Document(f"{path}:{lineno}", tuple(terms), label, language, domain))
    return Corpus(tuple(docs), (path,), _now())


def subgroup_counts(corpus: Corpus | Iterable[Document]) -> dict[tuple[Language, Sentiment], int]:
    counts = Counter((d.language, d.label) for d in corpus)
    return {key: counts.get(key, 0) for key in SUBGROUPS}


def write_cache(corpus: Corpus, path: str | os.PathLike) -> None:
    """Write a self-describing cache: the input format plus ``#lang#`` and ``#domain#`` pairs."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus:
            fh.write(doc.to_line(with_tags=True))
            fh.write("\n")


def read_cache(path: str | os.PathLike) -> Corpus:
    path = os.fspath(path)
    docs = []
    for lineno, line in _read_lines(path):
        if not line.strip():
            continue
        try:
            terms, label, tags = _parse_pairs(line, (LANG_TOKEN, DOMAIN_TOKEN))
            if LANG_TOKEN not in tags or DOMAIN_TOKEN not in tags:
                raise MalformedPairError("cache line lacks #lang# or #domain#", line)
            language = Language.parse(tags[LANG_TOKEN])
        except CorpusFormatError as exc:
            raise exc.locate(path, lineno) from None
        except ValueError as exc:
            raise MalformedPairError(str(exc), line).locate(path, lineno) from None
        docs.append(Document(f"{path}:{lineno}", tuple(terms), label, language, tags[DOMAIN_TOKEN]))
    return Corpus(tuple(docs), (path,), _now())
