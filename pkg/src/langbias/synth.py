"""Synthetic bag-of-words review corpora in the processed Webis-CLS-10 format.

Used for the in-repo fixtures and the kernel benchmark. Each review mixes
neutral filler with sentiment cue words; ``signal`` is the chance that a cue
word agrees with the review's label, so a higher value makes a language
easier to classify.
"""

from __future__ import annotations

import os

import numpy as np

from .corpus import Language

_WORDS = {
    Language.ENGLISH: {
        "neutral": ("the a and of to is it this that album song songs cd music band track tracks "
                    "sound voice record disc guitar lyrics listen heard years time first one").split(),
        "positive": "great love excellent beautiful best wonderful amazing enjoy perfect brilliant".split(),
        "negative": "bad boring worst waste awful poor terrible disappointing dull annoying".split(),
        "punct": ["!", "?", ".", "..", ","],
    },
    Language.FRENCH: {
        "neutral": ("le la les de et un une est ce que album chanson chansons disque musique groupe "
                    "titre titres son voix guitare paroles écouter écouté années premier").split(),
        "positive": "magnifique superbe excellent génial bravo parfait sublime merveilleux beau adore".split(),
        "negative": "nul mauvais décevant ennuyeux pire horrible médiocre raté dommage fade".split(),
        "punct": ["!", "?", ".", "...", ",", "'est"],
    },
}


def review_line(rng: np.random.Generator, language: Language, label: int, signal: float,
                length: tuple[int, int] = (15, 45), text_label: int | None = None) -> str:
    """One review line labeled ``label``; the cue words follow ``text_label`` (default: ``label``)."""
    words = _WORDS[language]
    text_label = label if text_label is None else text_label
    n = int(rng.integers(length[0], length[1] + 1))
    counts: dict[str, int] = {}
    for _ in range(n):
        r = rng.random()
        if r < 0.25:
            agree = rng.random() < signal
            pool = words["positive" if (text_label == 1) == agree else "negative"]
        elif r < 0.35:
            pool = words["punct"]
        else:
            pool = words["neutral"]
        tok = pool[int(rng.integers(len(pool)))]
        counts[tok] = counts.get(tok, 0) + 1
    pairs = [f"{t}:{c}" for t, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))]
    pairs.append("#label#:" + ("positive" if label else "negative"))
    return " ".join(pairs)


def write_corpus(path: str | os.PathLike, language: Language, n_pos: int, n_neg: int,
                 seed: int, signal: float, random_labels: bool = False) -> None:
    """``random_labels`` draws the text's sentiment independently of its label."""
    rng = np.random.default_rng(seed)
    labels = [1] * n_pos + [0] * n_neg
    rng.shuffle(labels)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for lab in labels:
            text_label = int(rng.integers(2)) if random_labels else lab
            fh.write(review_line(rng, language, lab, signal, text_label=text_label) + "\n")


def make_fixture(directory: str | os.PathLike, domain: str = "music", seed: int = 0,
                 sizes: tuple[int, int, int, int] = (70, 64, 52, 50),
                 signal: tuple[float, float] = (0.72, 0.85), random_labels: bool = False) -> dict:
    """Write ``<dir>/en/<domain>.processed`` and ``<dir>/fr/<domain>.processed``.

    ``sizes`` is (En+, En-, Fr+, Fr-). Returns ``{language: path}``.
    """
    out = {}
    for i, lang in enumerate(Language):
        sub = os.path.join(os.fspath(directory), lang.code)
        os.makedirs(sub, exist_ok=True)
        path = os.path.join(sub, f"{domain}.processed")
        write_corpus(path, lang, sizes[2 * i], sizes[2 * i + 1], seed * 2 + i, signal[i], random_labels)
        out[lang] = path
    return out
