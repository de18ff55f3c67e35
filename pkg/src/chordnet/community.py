"""Modularity, Louvain optimisation and degree-preserving null ensembles.

Modularity is the normalised form

    Q = 1/(2m) * sum_C sum_{i,j in C} [a_ij - d_i d_j / (2m)]

with self-loops counted twice on the diagonal, so the all-in-one partition
scores exactly zero.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from chordnet.errors import AlignmentError, ConfigError, DataError
from chordnet.network import ChordGraph, UndirectedGraph
from chordnet.spectral import RankVector

_EPS = 1e-12


@dataclass(frozen=True)
class Partition:
    labels: tuple[str, ...]
    membership: tuple[int, ...]
    modularity: float
    seed: int | None = None
    restarts: int = 1
    scores: tuple[float, ...] = field(default=(), repr=False)

    @property
    def n_communities(self) -> int:
        return max(self.membership) + 1 if self.membership else 0

    def communities(self) -> list[list[str]]:
        groups: list[list[str]] = [[] for _ in range(self.n_communities)]
        for label, c in zip(self.labels, self.membership):
            groups[c].append(label)
        return groups

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.labels, self.membership))


@dataclass(frozen=True)
class NullEnsembleStats:
    ensemble: int
    restarts: int
    mean: float
    std: float
    values: tuple[float, ...] = field(repr=False)
    method: str = "stub"
    weighted: bool = True

    def to_dict(self) -> dict:
        return {
            "ensemble": self.ensemble,
            "mean": self.mean,
            "method": self.method,
            "restarts": self.restarts,
            "std": self.std,
            "weighted": self.weighted,
        }


@dataclass(frozen=True)
class CommunityProfile:
    community: int
    size: int
    top: list[tuple[str, float]]
    mass: float

    @property
    def anchor(self) -> str:
        return self.top[0][0]


def relabel(membership) -> tuple[int, ...]:
    """Renumber communities 0..C-1 in order of first appearance."""
    mapping: dict[int, int] = {}
    return tuple(mapping.setdefault(c, len(mapping)) for c in membership)


def modularity(g: UndirectedGraph, membership) -> float:
    if isinstance(membership, Partition):
        membership = membership.membership
    membership = np.asarray(membership)
    if membership.shape != (g.n,):
        raise AlignmentError(f"partition covers {membership.size} vertices, graph has {g.n}")
    m = g.m
    if m <= 0:
        raise DataError("modularity is undefined for a graph without edges")
    a = g.loop_doubled().astype(float)
    d = g.degrees.astype(float)
    _, comm = np.unique(membership, return_inverse=True)
    onehot = np.zeros((g.n, comm.max() + 1))
    onehot[np.arange(g.n), comm] = 1.0
    intra = np.einsum("ic,ij,jc->c", onehot, a, onehot)
    tot = onehot.T @ d
    return float(((intra - tot * tot / (2 * m)) / (2 * m)).sum())


def _adjacency_lists(a: np.ndarray) -> tuple[list[dict[int, float]], list[float]]:
    nbrs: list[dict[int, float]] = [dict() for _ in range(len(a))]
    rows, cols = np.nonzero(a)
    for i, j in zip(rows.tolist(), cols.tolist()):
        if i != j:
            nbrs[i][j] = float(a[i, j])
    return nbrs, np.diag(a).astype(float).tolist()


def _move_nodes(nbrs, degrees, m2, rng) -> tuple[list[int], bool]:
    n = len(nbrs)
    comm = list(range(n))
    tot = list(degrees)
    order = rng.permutation(n).tolist()
    moved_any = False
    while True:
        moved = 0
        for i in order:
            ci = comm[i]
            ki = degrees[i]
            links: dict[int, float] = defaultdict(float)
            for j, w in nbrs[i].items():
                links[comm[j]] += w
            tot[ci] -= ki
            best_c = ci
            best_gain = links.get(ci, 0.0) - tot[ci] * ki / m2
            for c in sorted(links):
                if c == ci:
                    continue
                gain = links[c] - tot[c] * ki / m2
                if gain > best_gain + _EPS:
                    best_c, best_gain = c, gain
            tot[best_c] += ki
            if best_c != ci:
                comm[i] = best_c
                moved += 1
        if not moved:
            return comm, moved_any
        moved_any = True


def _aggregate(nbrs, loops, degrees, comm):
    ids = relabel(comm)
    k = max(ids) + 1
    new_nbrs: list[dict[int, float]] = [defaultdict(float) for _ in range(k)]
    new_loops = [0.0] * k
    new_degrees = [0.0] * k
    for i, ci in enumerate(ids):
        new_loops[ci] += loops[i]
        new_degrees[ci] += degrees[i]
        for j, w in nbrs[i].items():
            cj = ids[j]
            if cj == ci:
                new_loops[ci] += w / 2  # each internal edge is seen from both ends
            else:
                new_nbrs[ci][cj] += w
    return [dict(d) for d in new_nbrs], new_loops, new_degrees, ids


def louvain(g: UndirectedGraph, seed: int = 0) -> Partition:
    """Louvain modularity optimisation.

    Vertices are visited in a seed-shuffled order; each moves to the
    neighbouring community with the largest strictly positive gain over
    staying put, ties going to the lowest community id.  Levels alternate
    local moving and aggregation until a level moves nothing.
    """
    m = g.m
    if m <= 0:
        raise DataError("Louvain needs a graph with at least one edge")
    rng = np.random.default_rng(seed)
    nbrs, loops = _adjacency_lists(g.adjacency)
    degrees = g.degrees.astype(float).tolist()
    membership = list(range(g.n))
    while True:
        comm, moved = _move_nodes(nbrs, degrees, 2 * m, rng)
        if not moved:
            break
        nbrs, loops, degrees, ids = _aggregate(nbrs, loops, degrees, comm)
        membership = [ids[c] for c in membership]
    membership = relabel(membership)
    return Partition(g.labels, membership, modularity(g, membership), seed=seed, restarts=1)


def best_partition(g: UndirectedGraph, restarts: int = 100) -> Partition:
    """Best of ``restarts`` Louvain runs with seeds 0..restarts-1."""
    if restarts < 1:
        raise ConfigError("restarts must be at least 1")
    runs = [louvain(g, seed) for seed in range(restarts)]
    scores = tuple(p.modularity for p in runs)
    best = max(range(restarts), key=lambda s: (scores[s], -s))
    p = runs[best]
    return Partition(p.labels, p.membership, p.modularity, seed=p.seed, restarts=restarts, scores=scores)


def community_profile(g: ChordGraph, partition: Partition, p: RankVector, top: int = 5) -> list[CommunityProfile]:
    """Per-community PageRank leaders, largest PageRank mass first."""
    if set(g.labels) != set(partition.labels) or set(g.labels) != set(p.labels):
        raise AlignmentError("graph, partition and rank vector cover different vertex sets")
    scores = p.as_dict()
    profiles = []
    for c, members in enumerate(partition.communities()):
        ranked = sorted(members, key=lambda label: (-scores[label], label))
        profiles.append(
            CommunityProfile(
                community=c,
                size=len(members),
                top=[(label, scores[label]) for label in ranked[:top]],
                mass=float(sum(scores[label] for label in members)),
            )
        )
    profiles.sort(key=lambda prof: (-prof.mass, prof.community))
    return profiles


def binarize(g: UndirectedGraph) -> UndirectedGraph:
    """Simple-graph projection: every nonzero weight becomes 1."""
    return UndirectedGraph(g.labels, (g.adjacency > 0).astype(np.int64))


def drop_self_loops(g: UndirectedGraph) -> UndirectedGraph:
    a = np.array(g.adjacency)
    np.fill_diagonal(a, 0)
    return UndirectedGraph(g.labels, a)


def _integer_adjacency(g: UndirectedGraph) -> np.ndarray:
    a = np.asarray(g.adjacency)
    ai = np.rint(a).astype(np.int64)
    if not np.array_equal(ai, a):
        raise DataError("configuration rewiring needs integer edge multiplicities")
    return ai


def _edge_list(a: np.ndarray) -> np.ndarray:
    iu, ju = np.nonzero(np.triu(a))
    counts = a[iu, ju]
    return np.column_stack([np.repeat(iu, counts), np.repeat(ju, counts)])


def configuration_rewire(g: UndirectedGraph, seed: int = 0, method: str = "stub") -> UndirectedGraph:
    """Random multigraph with exactly the degrees of ``g``.

    ``stub`` pairs half-edges uniformly at random; ``swap`` applies 10 m random
    double-edge swaps.  Both keep multi-edges and self-loops.
    """
    a = _integer_adjacency(g)
    if g.m <= 0:
        raise DataError("cannot rewire a graph without edges")
    rng = np.random.default_rng(seed)
    n = g.n
    if method == "stub":
        degrees = a.sum(axis=1) + np.diag(a)
        stubs = np.repeat(np.arange(n), degrees)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
    elif method == "swap":
        edges = _edge_list(a).tolist()
        n_edges = len(edges)
        if n_edges >= 2:
            picks = rng.integers(0, n_edges, size=(10 * n_edges, 2))
            flips = rng.random(10 * n_edges) < 0.5
            for (e1, e2), flip in zip(picks.tolist(), flips.tolist()):
                if e1 == e2:
                    continue
                a1, b1 = edges[e1]
                c2, d2 = edges[e2]
                if flip:
                    c2, d2 = d2, c2
                edges[e1] = [a1, d2]
                edges[e2] = [c2, b1]
        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    else:
        raise ConfigError(f"unknown rewiring method {method!r}")
    out = np.zeros((n, n), dtype=np.int64)
    u, v = pairs[:, 0], pairs[:, 1]
    off = u != v
    np.add.at(out, (u[off], v[off]), 1)
    np.add.at(out, (v[off], u[off]), 1)
    np.add.at(out, (u[~off], u[~off]), 1)
    return UndirectedGraph(g.labels, out)


def _null_member(args) -> float:
    g, seed, restarts, method = args
    return best_partition(configuration_rewire(g, seed, method), restarts).modularity


def null_modularity_stats(
    g: UndirectedGraph,
    ensemble: int = 1000,
    restarts: int = 10,
    seed: int = 0,
    method: str = "stub",
    weighted: bool = True,
    n_jobs: int = 1,
) -> NullEnsembleStats:
    """Mean and sample standard deviation of the best modularity over rewired copies.

    Each member draws its own seed from ``seed`` so the values do not depend
    on ``n_jobs``.
    """
    if ensemble < 2:
        raise ConfigError("ensemble size must be at least 2")
    base = g if weighted else binarize(g)
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(ensemble)]
    jobs = [(base, s, restarts, method) for s in seeds]
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            values = list(pool.map(_null_member, jobs, chunksize=max(1, ensemble // (4 * n_jobs))))
    else:
        values = [_null_member(job) for job in jobs]
    arr = np.asarray(values)
    return NullEnsembleStats(
        ensemble=ensemble,
        restarts=restarts,
        mean=float(arr.mean()),
        std=float(arr.std(ddof=1)),
        values=tuple(values),
        method=method,
        weighted=weighted,
    )
