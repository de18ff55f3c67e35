"""Compare PageRank vectors of different corpora.

Vectors from different graphs live on different label sets; they are compared
on the union of labels, with zeros for labels a graph does not contain.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from chordnet.annotations import Corpus
from chordnet.errors import ConfigError, HarnessError, NumericalError
from chordnet.network import ChordGraph, build_graph
from chordnet.spectral import DEFAULT_ALPHA, RankVector, build_google, pagerank

log = logging.getLogger(__name__)

DENSITY_RADIUS = 0.002
METRICS = ("fidelity", "similarity")


@dataclass(frozen=True, eq=False)
class AlignedVectorPair:
    labels: tuple[str, ...]
    p: np.ndarray
    q: np.ndarray
    norm: str = "L1"


def align(p: RankVector, q: RankVector) -> AlignedVectorPair:
    labels = tuple(sorted(set(p.labels) | set(q.labels)))
    idx = {label: i for i, label in enumerate(labels)}
    vp = np.zeros(len(labels))
    vq = np.zeros(len(labels))
    vp[[idx[x] for x in p.labels]] = p.scores
    vq[[idx[x] for x in q.labels]] = q.scores
    return AlignedVectorPair(labels, vp, vq, p.norm)


def fidelity(p: RankVector, q: RankVector) -> float:
    """Squared overlap of the two L2-normalised vectors."""
    pair = align(p, q)
    np_, nq = np.linalg.norm(pair.p), np.linalg.norm(pair.q)
    if np_ == 0 or nq == 0:
        raise NumericalError("fidelity is undefined for a zero vector")
    overlap = float(np.dot(pair.p / np_, pair.q / nq))
    return min(1.0, overlap * overlap)


def similarity(p: RankVector, q: RankVector, m: int = 30) -> int:
    """Number of labels shared by the two top-m lists.

    If either vector has fewer than ``m`` labels, ``m`` is clamped to the
    smaller size.
    """
    m_eff = min(m, len(p), len(q))
    if m_eff < m:
        log.debug("top-m clamped from %d to %d", m, m_eff)
    return len(set(p.top(m_eff)) & set(q.top(m_eff)))


def _eligible_quartets(corpus: Corpus, period: str, mode: str) -> list[str]:
    return corpus.filter(mode=mode, period=period).quartets()


def pair_graphs(corpus: Corpus, period: str, mode: str) -> dict[tuple[str, str], ChordGraph]:
    """One graph per unordered pair of quartets from ``period`` in ``mode``."""
    quartets = _eligible_quartets(corpus, period, mode)
    if len(quartets) < 2:
        raise HarnessError(f"period {period!r} has {len(quartets)} quartet(s) with {mode} segments; need 2")
    sub = corpus.filter(mode=mode, period=period)
    return {(a, b): build_graph(sub.filter(quartets={a, b})) for a, b in itertools.combinations(quartets, 2)}


@dataclass(frozen=True)
class ComparisonCell:
    period_i: str
    period_j: str
    values: tuple[float, ...]
    pairs: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...] = field(repr=False)
    mean: float
    std: float

    @property
    def count(self) -> int:
        return len(self.values)

    def densities(self, radius: float = DENSITY_RADIUS) -> list[int]:
        """Number of values within ``radius`` of each value, itself included."""
        v = np.asarray(self.values)
        return [int(np.sum(np.abs(v - x) <= radius + 1e-15)) for x in v]


@dataclass(frozen=True)
class ComparisonMatrix:
    metric: str
    mode: str
    periods: tuple[str, ...]
    cells: dict[tuple[str, str], ComparisonCell]
    top_m: int

    def cell(self, a: str, b: str) -> ComparisonCell:
        if (a, b) in self.cells:
            return self.cells[(a, b)]
        return self.cells[(b, a)]


def _cell(pi: str, pj: str, values: list[float], pairs: list) -> ComparisonCell:
    if values:
        arr = np.asarray(values)
        mean, std = float(arr.mean()), float(arr.std())
    else:
        mean = std = float("nan")
    return ComparisonCell(pi, pj, tuple(values), tuple(pairs), mean, std)


def period_vectors(corpus: Corpus, mode: str, alpha: float = DEFAULT_ALPHA, tol: float = 1e-12) -> dict[str, dict[tuple[str, ...], RankVector]]:
    """PageRank vectors per period, keyed by the quartet group they were built from.

    A period with one quartet contributes that quartet alone, so it can still
    be compared against other periods.
    """
    out = {}
    for period in corpus.periods():
        quartets = _eligible_quartets(corpus, period, mode)
        if not quartets:
            continue
        if len(quartets) == 1:
            graphs = {(quartets[0],): build_graph(corpus.filter(mode=mode, period=period))}
        else:
            graphs = pair_graphs(corpus, period, mode)
        out[period] = {group: pagerank(build_google(g, alpha), tol) for group, g in graphs.items()}
    return out


def period_comparison(
    corpus: Corpus,
    mode: str,
    metric: str = "fidelity",
    alpha: float = DEFAULT_ALPHA,
    top_m: int = 30,
    tol: float = 1e-12,
    vectors: dict | None = None,
) -> ComparisonMatrix:
    """Metric over every admissible pair of vectors, for each pair of periods.

    Within a period only vectors built from disjoint quartet sets are paired;
    across periods every combination is used.
    """
    if metric not in METRICS:
        raise ConfigError(f"metric must be one of {METRICS}, not {metric!r}")
    vectors = vectors if vectors is not None else period_vectors(corpus, mode, alpha, tol)
    score = fidelity if metric == "fidelity" else (lambda p, q: float(similarity(p, q, top_m)))
    periods = tuple(vectors)
    cells = {}
    for i, pi in enumerate(periods):
        for pj in periods[i:]:
            values, pairs = [], []
            if pi == pj:
                for (ga, va), (gb, vb) in itertools.combinations(vectors[pi].items(), 2):
                    if set(ga).isdisjoint(gb):
                        values.append(score(va, vb))
                        pairs.append((ga, gb))
            else:
                for (ga, va), (gb, vb) in itertools.product(vectors[pi].items(), vectors[pj].items()):
                    values.append(score(va, vb))
                    pairs.append((ga, gb))
            cells[(pi, pj)] = _cell(pi, pj, values, pairs)
    return ComparisonMatrix(metric, mode, periods, cells, top_m)
