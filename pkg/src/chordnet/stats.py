"""Descriptive corpus statistics: chord frequencies, rank-frequency tables, bigrams."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from chordnet.annotations import Corpus
from chordnet.errors import EmptyGraphError
from chordnet.network import build_graph
from chordnet.spectral import DEFAULT_ALPHA, PowerLawFit, build_google, fit_powerlaw, pagerank

ZIPF_WINDOW = (9, 300)  # ranks 10..300


@dataclass(frozen=True)
class FrequencyTable:
    counts: dict[str, int]

    def ranking(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def ranks(self) -> dict[str, int]:
        return {label: r for r, (label, _) in enumerate(self.ranking(), start=1)}

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class BigramMatrix:
    counts: dict[tuple[str, str], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, pair: tuple[str, str]) -> int:
        return self.counts.get(pair, 0)


def frequency_table(corpus: Corpus) -> FrequencyTable:
    if corpus.n_events == 0:
        raise EmptyGraphError("frequency table of an empty corpus")
    return FrequencyTable(dict(Counter(e.label for e in corpus.events())))


def zipf_table(table: FrequencyTable) -> list[tuple[int, int]]:
    return [(r, count) for r, (_, count) in enumerate(table.ranking(), start=1)]


def zipf_fit(table: FrequencyTable, window: tuple[int, int | None] = ZIPF_WINDOW) -> PowerLawFit:
    """Rank-frequency fit; the Zipf exponent is minus the slope."""
    pairs = zipf_table(table)
    return fit_powerlaw([r for r, _ in pairs], [f for _, f in pairs], window)


def bigram_matrix(corpus: Corpus) -> BigramMatrix:
    if corpus.n_events == 0:
        raise EmptyGraphError("bigram matrix of an empty corpus")
    counts: Counter = Counter()
    for seq in corpus.label_sequences():
        counts.update(zip(seq[:-1], seq[1:]))
    return BigramMatrix(dict(counts))


@dataclass(frozen=True)
class RankComparison:
    label: str
    frequency: int
    frequency_rank: int
    pagerank: float
    pagerank_rank: int


def pagerank_vs_frequency(corpus: Corpus, alpha: float = DEFAULT_ALPHA, tol: float = 1e-12) -> list[RankComparison]:
    """Frequency rank against PageRank rank per label, in frequency order."""
    table = frequency_table(corpus)
    p = pagerank(build_google(build_graph(corpus), alpha), tol)
    scores = p.as_dict()
    pr_ranks = p.ranks()
    return [
        RankComparison(label, count, r, scores[label], pr_ranks[label])
        for r, (label, count) in enumerate(table.ranking(), start=1)
    ]
