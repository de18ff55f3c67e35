"""Small builders shared by the test modules."""

import numpy as np

from chordnet.annotations import ChordEvent, Corpus
from chordnet.network import ChordGraph, UndirectedGraph


def corpus_from(segments, mode="major", quartets=None, periods=None):
    """Corpus from plain label lists; quartet/period per segment optional."""
    out = []
    for sid, seq in enumerate(segments):
        q = quartets[sid] if quartets else "q1"
        p = periods[sid] if periods else "early"
        m = mode[sid] if isinstance(mode, (list, tuple)) else mode
        out.append(tuple(
            ChordEvent(label=label, mode=m, segment_id=sid, quartet=q, period=p, position=i, is_segment_start=i == 0)
            for i, label in enumerate(seq)
        ))
    return Corpus(tuple(out))


def random_multigraph(rng, n, density=0.4, max_weight=4, loops=True):
    w = rng.integers(1, max_weight + 1, size=(n, n)) * (rng.random((n, n)) < density)
    if not loops:
        np.fill_diagonal(w, 0)
    labels = tuple(f"v{i:02d}" for i in range(n))
    return ChordGraph(labels, w.astype(np.int64))


def undirected(a):
    a = np.asarray(a, dtype=np.int64)
    return UndirectedGraph(tuple(f"v{i}" for i in range(len(a))), a)


def two_triangles():
    a = np.zeros((6, 6), dtype=np.int64)
    for i, j in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]:
        a[i, j] = a[j, i] = 1
    return undirected(a)


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in set_partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


def brute_modularity(a, groups):
    """Modularity straight from the textbook double sum, loops counted twice."""
    a = np.asarray(a, dtype=float)
    ad = a + np.diag(np.diag(a))
    d = ad.sum(axis=1)
    m2 = d.sum()
    total = 0.0
    for c in groups:
        for i in c:
            for j in c:
                total += ad[i, j] - d[i] * d[j] / m2
    return total / m2


def exhaustive_max_modularity(a):
    return max(brute_modularity(a, p) for p in set_partitions(range(len(a))))
