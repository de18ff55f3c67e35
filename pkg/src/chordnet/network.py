"""Weighted directed chord-transition graphs and their undirected projections."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from chordnet.annotations import Corpus
from chordnet.errors import ConfigError, EmptyGraphError


@dataclass(frozen=True, eq=False)
class ChordGraph:
    """Directed multigraph over chord labels.

    ``weights[i, j]`` is the number of times chord ``labels[j]`` immediately
    follows chord ``labels[i]`` inside a segment.  Vertices are sorted
    lexicographically so matrices and rankings are reproducible.
    """

    labels: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def out_degree(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def in_degree(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    def total_weight(self) -> int:
        return int(self.weights.sum())

    def weight(self, source: str, target: str) -> int:
        idx = self.index
        if source not in idx or target not in idx:
            return 0
        return int(self.weights[idx[source], idx[target]])

    def edges(self) -> list[tuple[str, str, int]]:
        """(source, target, weight) for every nonzero weight, in matrix order."""
        rows, cols = np.nonzero(self.weights)
        return [(self.labels[i], self.labels[j], int(self.weights[i, j])) for i, j in zip(rows, cols)]

    def as_dict(self) -> dict[tuple[str, str], int]:
        return {(s, t): w for s, t, w in self.edges()}


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    """Symmetric weights with ``adjacency[i, i]`` holding the self-loop weight.

    A self-loop of weight ``w`` contributes ``2w`` to the vertex degree, so
    that ``degrees.sum() == 2 * m``.
    """

    labels: tuple[str, ...]
    adjacency: np.ndarray

    def __post_init__(self):
        self.adjacency.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1) + np.diag(self.adjacency)

    @property
    def m(self) -> float:
        a = self.adjacency
        return float(np.triu(a, k=1).sum() + np.trace(a))

    def loop_doubled(self) -> np.ndarray:
        """Adjacency with self-loops counted twice, as in the modularity sum."""
        return self.adjacency + np.diag(np.diag(self.adjacency))


class CumulativeDistribution(NamedTuple):
    k: np.ndarray  # realized degrees divided by the maximum degree
    count: np.ndarray  # number of vertices with degree strictly above k
    k_max: float


def graph_from_sequences(sequences: Iterable[Sequence[str]]) -> ChordGraph:
    """Graph from label sequences; transitions never cross sequence boundaries."""
    pairs: Counter = Counter()
    labels: set[str] = set()
    for seq in sequences:
        labels.update(seq)
        pairs.update(zip(seq[:-1], seq[1:]))
    if not labels:
        raise EmptyGraphError("cannot build a graph from zero chords")
    ordered = tuple(sorted(labels))
    idx = {label: i for i, label in enumerate(ordered)}
    weights = np.zeros((len(ordered), len(ordered)), dtype=np.int64)
    for (a, b), count in pairs.items():
        weights[idx[a], idx[b]] = count
    return ChordGraph(ordered, weights)


def graph_from_edges(labels: Iterable[str], edges: Mapping[tuple[str, str], int]) -> ChordGraph:
    vertices = set(labels)
    for a, b in edges:
        vertices.update((a, b))
    ordered = tuple(sorted(vertices))
    idx = {label: i for i, label in enumerate(ordered)}
    weights = np.zeros((len(ordered), len(ordered)), dtype=np.int64)
    for (a, b), count in edges.items():
        weights[idx[a], idx[b]] += count
    return ChordGraph(ordered, weights)


def build_graph(corpus: Corpus) -> ChordGraph:
    return graph_from_sequences(corpus.label_sequences())


def build_period_graphs(corpus: Corpus) -> dict[str, ChordGraph]:
    return {period: build_graph(corpus.filter(period=period)) for period in corpus.periods()}


def undirect(g: ChordGraph) -> UndirectedGraph:
    w = g.weights
    a = w + w.T
    np.fill_diagonal(a, np.diag(w))
    return UndirectedGraph(g.labels, a)


def degree_distribution(g: ChordGraph, direction: str = "in", weighted: bool = True) -> CumulativeDistribution:
    """Number of vertices whose degree exceeds k, for every realized k.

    The first point is always k = 0.  With ``weighted=False`` a vertex's degree
    is its number of distinct neighbours in that direction.
    """
    if g.n == 0:
        raise EmptyGraphError("degree distribution of an empty graph")
    w = g.weights if weighted else (g.weights > 0).astype(np.int64)
    if direction == "out":
        degrees = w.sum(axis=1)
    elif direction == "in":
        degrees = w.sum(axis=0)
    else:
        raise ConfigError(f"direction must be 'in' or 'out', not {direction!r}")
    k_max = float(degrees.max())
    ks = np.unique(np.concatenate([[0], degrees]))
    ordered = np.sort(degrees)
    counts = len(degrees) - np.searchsorted(ordered, ks, side="right")
    scale = k_max if k_max > 0 else 1.0
    return CumulativeDistribution(ks / scale, counts, k_max)
