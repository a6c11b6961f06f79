"""Term normalization: lowercasing, stopword removal and pluggable filters."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Mapping, Sequence

from .corpus import Corpus, Document, Language

TermFilter = Callable[[str], bool]


def read_stopwords(path: str | os.PathLike) -> frozenset[str]:
    """Read a stopword list: UTF-8, one term per line, ``#`` starts a comment."""
    with open(path, encoding="utf-8") as fh:
        return _parse_stopwords(fh.read())


def _parse_stopwords(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line)
    return frozenset(words)


def default_stopwords(language: Language | str) -> frozenset[str]:
    language = Language.parse(language)
    text = (resources.files("langbias") / "data" / "stopwords" / f"{language.code}.txt").read_text("utf-8")
    return _parse_stopwords(text)


@dataclass(frozen=True)
class PreprocessConfig:
    """Options for :func:`preprocess`.

    ``extra_filters`` is an ordered list of ``(name, keep)`` pairs; a term
    survives a filter when ``keep(term)`` is true. It is the seam for
    entity removal or lemmatization passes, and is empty by default.
    """

    lowercase: bool = True
    stopword_lists: Mapping[Language, frozenset[str]] = field(default_factory=dict)
    min_term_length: int = 1
    extra_filters: Sequence[tuple[str, TermFilter]] = ()

    def __post_init__(self):
        if self.min_term_length < 0:
            raise ValueError("min_term_length must be non-negative")
        if self.lowercase:
            for lang, words in self.stopword_lists.items():
                bad = sorted(w for w in words if w != w.lower())
                if bad:
                    raise ValueError(f"{Language.parse(lang).code} stopwords must be lowercase: {bad[:5]}")

    @classmethod
    def with_default_stopwords(cls, **kwargs) -> "PreprocessConfig":
        lists = {lang: default_stopwords(lang) for lang in Language}
        return cls(stopword_lists=lists, **kwargs)

    def describe(self) -> dict[str, str]:
        return {
            "lowercase": str(self.lowercase).lower(),
            "min_term_length": str(self.min_term_length),
            "stopwords_en": str(len(self.stopword_lists.get(Language.ENGLISH, ()))),
            "stopwords_fr": str(len(self.stopword_lists.get(Language.FRENCH, ()))),
            "extra_filters": ",".join(name for name, _ in self.extra_filters) or "none",
        }


def preprocess_document(doc: Document, config: PreprocessConfig) -> Document:
    stop = config.stopword_lists.get(doc.language, frozenset())
    merged: dict[str, int] = {}
    for term, count in doc.terms:
        if config.lowercase:
            term = term.lower()
        merged[term] = merged.get(term, 0) + count
    kept = []
    for term, count in merged.items():
        if term in stop or len(term) < config.min_term_length:
            continue
        if all(keep(term) for _, keep in config.extra_filters):
            kept.append((term, count))
    return Document(doc.id, tuple(kept), doc.label, doc.language, doc.domain)


def preprocess(corpus: Corpus, config: PreprocessConfig) -> Corpus:
    """Apply ``config`` to every document, preserving order and metadata.

    Documents left with no terms are kept; they vectorize to the zero vector.
    """
    return corpus.with_documents(preprocess_document(d, config) for d in corpus)
