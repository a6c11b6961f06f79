"""Subgroup balancing and stratified train/test splitting.

All randomness goes through :class:`SplitMix64`, a 64-bit-state generator
with a published reference algorithm, so a given seed produces the same
shuffles in any implementation. Each stratum draws from its own stream,
derived from ``(seed, purpose, stratum)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .corpus import SUBGROUPS, Corpus, Language, Sentiment, subgroup_counts

PRNG_ID = "splitmix64+fisher-yates/v1"

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 (Steele, Lea & Flood 2014) with unbiased bounded draws."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _mix64(self.state)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection of the biased low range."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = ((1 << 64) - bound) % bound
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % bound

    def shuffle(self, items: list) -> list:
        """In-place Fisher-Yates shuffle (descending index); returns ``items``."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    @classmethod
    def stream(cls, seed: int, *key: int) -> "SplitMix64":
        """Independent stream for ``key`` under ``seed``."""
        state = _mix64(seed & _MASK)
        for k in key:
            state = _mix64((state ^ _mix64((k + 1) * _GOLDEN & _MASK)) & _MASK)
        return cls(state)


# stream purposes
_BALANCE, _BALANCE_MIX, _SPLIT, _KFOLD = 1, 2, 3, 4


def _stratum_key(group: tuple[Language, Sentiment]) -> int:
    return int(group[0]) * 2 + int(group[1])


class EmptySubgroupError(ValueError):
    pass


@dataclass(frozen=True)
class SplitSpec:
    seed: int = 0
    train_fraction: float = 0.8

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")


@dataclass
class BalanceReport:
    original: dict[tuple[Language, Sentiment], int]
    target: int
    sampled: dict[tuple[Language, Sentiment], list[str]]
    seed: int
    prng: str = PRNG_ID
    domain: str | None = None

    @property
    def total(self) -> int:
        return self.target * len(self.sampled)

    def to_items(self) -> list[tuple[str, str]]:
        items = [("prng", self.prng), ("seed", str(self.seed))]
        if self.domain is not None:
            items.append(("domain", self.domain))
        for lang, sent in SUBGROUPS:
            items.append((f"original.{lang.code}.{sent.word}", str(self.original[(lang, sent)])))
        items.append(("target_per_subgroup", str(self.target)))
        items.append(("balanced_total", str(self.total)))
        return items

    def to_text(self) -> str:
        lines = [f"Subgroup balancing (seed {self.seed}, {self.prng})"]
        if self.domain:
            lines[0] += f" -- {self.domain}"
        lines.append(f"{'subgroup':<20}{'original':>10}{'sampled':>10}")
        for lang, sent in SUBGROUPS:
            name = f"{lang.title} {sent.word}"
            lines.append(f"{name:<20}{self.original[(lang, sent)]:>10}{self.target:>10}")
        lines.append(f"{'total':<20}{sum(self.original.values()):>10}{self.total:>10}")
        return "\n".join(lines) + "\n"


def balance(corpus: Corpus, seed: int) -> tuple[Corpus, BalanceReport]:
    """Downsample every language x sentiment subgroup to the smallest one's size.

    Each subgroup is shuffled with its own stream and truncated to ``k``; the
    four samples are concatenated (En+, En-, Fr+, Fr-) and shuffled once more.
    """
    counts = subgroup_counts(corpus)
    empty = [f"{lang.code}/{sent.word}" for (lang, sent), n in counts.items() if n == 0]
    if empty:
        raise EmptySubgroupError(f"cannot balance: empty subgroup(s) {', '.join(empty)}")
    k = min(counts.values())

    members = {g: [] for g in SUBGROUPS}
    for doc in corpus:
        members[(doc.language, doc.label)].append(doc)

    picked = []
    sampled = {}
    for group in SUBGROUPS:
        docs = SplitMix64.stream(seed, _BALANCE, _stratum_key(group)).shuffle(members[group])[:k]
        sampled[group] = [d.id for d in docs]
        picked.extend(docs)
    SplitMix64.stream(seed, _BALANCE_MIX).shuffle(picked)

    domains = sorted({d.domain for d in corpus})
    report = BalanceReport(counts, k, sampled, seed, domain=",".join(domains) or None)
    return corpus.with_documents(picked), report


def _train_sizes(sizes: Sequence[int], fraction: Fraction) -> list[int]:
    # floor per stratum, then hand the leftover to the largest remainders;
    # ties prefer smaller strata, then fixed stratum order
    exact = [fraction * n for n in sizes]
    base = [int(x) for x in exact]
    total_exact = sum(exact)
    target = -(-total_exact.numerator // total_exact.denominator)  # ceil
    leftover = target - sum(base)
    order = sorted(range(len(sizes)), key=lambda i: (-(exact[i] - base[i]), sizes[i], i))
    for i in order[:leftover]:
        base[i] += 1
    return base


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Stratified split by language x sentiment.

    Each stratum contributes ``floor(f * n)`` or one more document to train,
    with the extra ones assigned by largest remainder so the train size is
    ``ceil(f * N)``. Relative document order inside train and test follows
    the input corpus.
    """
    if len(corpus) == 0:
        raise ValueError("cannot split an empty corpus")
    fraction = Fraction(repr(float(spec.train_fraction)))
    positions = {g: [] for g in SUBGROUPS}
    for i, doc in enumerate(corpus):
        positions[(doc.language, doc.label)].append(i)

    sizes = [len(positions[g]) for g in SUBGROUPS]
    n_train = _train_sizes(sizes, fraction)
    in_train = [False] * len(corpus)
    for group, k in zip(SUBGROUPS, n_train):
        idx = SplitMix64.stream(spec.seed, _SPLIT, _stratum_key(group)).shuffle(list(positions[group]))
        for i in idx[:k]:
            in_train[i] = True

    train = [d for d, t in zip(corpus, in_train) if t]
    test = [d for d, t in zip(corpus, in_train) if not t]
    return corpus.with_documents(train), corpus.with_documents(test)


def permutation(n: int, seed: int, *key: int) -> list[int]:
    return SplitMix64.stream(seed, *key).shuffle(list(range(n)))
