from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from chordnet.errors import ConfigError, EigenvalueLookupError, FitError, NumericalError
from chordnet.network import graph_from_edges
from chordnet.spectral import (
    RankVector,
    build_google,
    eigenvector_support,
    fit_powerlaw,
    pagerank,
    rank_plot_fit,
    spectrum,
    transition_matrix,
)

from helpers import random_multigraph

# exact PageRank of THREE at alpha = 17/20, from a rational nullspace computation
THREE_EXACT = [Fraction(18, 37), Fraction(241, 740), Fraction(139, 740)]


def three():
    return graph_from_edges("ABC", {("A", "B"): 2, ("A", "C"): 1, ("B", "A"): 1, ("C", "A"): 1})


def cycle(n, weight=1, prefix="c"):
    return {(f"{prefix}{i}", f"{prefix}{(i + 1) % n}"): weight for i in range(n)}


def match_multisets(a, b):
    """Largest distance after optimally pairing two complex multisets."""
    cost = np.abs(np.subtract.outer(a, b))
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max() if len(rows) else 0.0


# build_google


def test_two_cycle_alpha_one():
    G = build_google(graph_from_edges("AB", {("A", "B"): 1, ("B", "A"): 1}), 1.0)
    assert np.array_equal(G.matrix, [[0, 1], [1, 0]])


def test_dangling_column():
    g = graph_from_edges("ABCD", {("A", "B"): 1, ("B", "C"): 2, ("C", "A"): 1})
    G = build_google(g, 0.85)
    assert np.allclose(G.matrix[:, g.index["D"]], 0.25, atol=1e-15)


def test_three_vertex_column():
    G = build_google(three(), 0.85)
    assert np.allclose(G.matrix[:, 0], 0.85 * np.array([0, 2 / 3, 1 / 3]) + 0.05, atol=1e-15)


@pytest.mark.parametrize("alpha", [-0.1, 1.5])
def test_alpha_out_of_range(alpha):
    with pytest.raises(ConfigError):
        build_google(three(), alpha)


def test_stochastic_random_graphs(rng):
    for _ in range(100):
        n = int(rng.integers(1, 40))
        g = random_multigraph(rng, n, density=float(rng.uniform(0.05, 0.6)))
        alpha = float(rng.uniform(0, 1))
        G = build_google(g, alpha)
        assert np.all(np.abs(G.matrix.sum(axis=0) - 1) <= 1e-12)
        assert np.all(G.matrix >= (1 - alpha) / n - 1e-15)


# pagerank


@pytest.mark.parametrize("alpha", [0.0, 0.5, 0.85, 0.99])
def test_pagerank_two_cycle(alpha):
    p = pagerank(build_google(graph_from_edges("AB", {("A", "B"): 1, ("B", "A"): 1}), alpha))
    assert np.allclose(p.scores, 0.5, atol=1e-15)


def test_pagerank_three_exact():
    p = pagerank(build_google(three(), 0.85))
    assert np.allclose(p.scores, [float(x) for x in THREE_EXACT], atol=1e-10, rtol=0)
    assert p.ranking() == ["A", "B", "C"]


def test_pagerank_fixed_point_and_eigen_oracle(rng):
    for _ in range(30):
        n = int(rng.integers(2, 51))
        G = build_google(random_multigraph(rng, n, density=0.2), 0.85)
        p = pagerank(G, tol=1e-12)
        assert abs(p.scores.sum() - 1) < 1e-10
        assert np.all(p.scores > 0)
        assert np.abs(G.matrix @ p.scores - p.scores).sum() < 10 * 1e-12
        values, vectors = np.linalg.eig(G.matrix)
        v = np.real(vectors[:, np.argmin(np.abs(values - 1))])
        v = v / v.sum()
        assert np.abs(v - p.scores).max() < 1e-8


def test_pagerank_nonconvergence():
    with pytest.raises(NumericalError, match="residual"):
        pagerank(build_google(three(), 0.85), tol=1e-12, max_iter=3)


def test_rankvector_tiebreak():
    p = RankVector(("b", "a", "c"), np.array([0.25, 0.25, 0.5]))
    assert p.ranking() == ["c", "a", "b"]
    assert p.ranks() == {"c": 1, "a": 2, "b": 3}


# spectrum


def test_two_cycle_spectrum():
    s = spectrum(build_google(graph_from_edges("AB", {("A", "B"): 1, ("B", "A"): 1}), 0.85))
    assert np.allclose(s.eigenvalues, [1, -0.85], atol=1e-12)


def test_five_cycle_circulant():
    s = spectrum(build_google(graph_from_edges([], cycle(5)), 0.85))
    expected = np.concatenate([[1], 0.85 * np.exp(2j * np.pi * np.arange(1, 5) / 5)])
    assert match_multisets(s.eigenvalues, expected) < 1e-10
    assert s.eigenvalues[0] == pytest.approx(1)
    assert np.all(np.diff(s.moduli) <= 1e-12)


def test_spectrum_invariants_random(rng):
    for _ in range(40):
        n = int(rng.integers(2, 31))
        g = random_multigraph(rng, n, density=0.3, max_weight=9)
        values = spectrum(build_google(g, 0.85)).eigenvalues
        near_one = np.abs(values - 1) < 1e-8
        assert near_one.sum() == 1
        assert np.all(np.abs(values[~near_one]) <= 0.85 + 1e-8)
        assert match_multisets(values, values.conj()) < 1e-8


def test_teleportation_relation(rng):
    # every pair connected: sparse instances can carry defective eigenvalues that
    # no eigensolver resolves to 1e-8
    for _ in range(40):
        n = int(rng.integers(2, 31))
        g = random_multigraph(rng, n, density=1.0, max_weight=9)
        alpha = float(rng.uniform(0.1, 0.95))
        values = spectrum(build_google(g, alpha)).eigenvalues
        s_values = np.linalg.eigvals(transition_matrix(g))
        s_rest = np.delete(s_values, np.argmin(np.abs(s_values - 1)))
        g_rest = np.delete(values, np.argmin(np.abs(values - 1)))
        assert match_multisets(g_rest, alpha * s_rest) < 1e-8


# eigenvector_support


def test_support_five_cycle_uniform():
    G = build_google(graph_from_edges([], cycle(5)), 0.85)
    lam = 0.85 * np.exp(2j * np.pi / 5)
    support = eigenvector_support(G, lam)
    amps = [a for _, a in support]
    assert np.allclose(amps, 1 / np.sqrt(5), atol=1e-10)


def test_support_cycle_in_clique():
    edges = cycle(5, weight=20)
    clique = [f"k{i}" for i in range(6)]
    edges.update({(a, b): 20 for a in clique for b in clique if a != b})
    edges[("c0", "k0")] = 1
    edges[("k0", "c0")] = 1
    G = build_google(graph_from_edges([], edges), 0.85)
    values = spectrum(G).eigenvalues
    target = 0.85 * np.exp(2j * np.pi / 5)
    lam = values[np.argmin(np.abs(values - target))]
    assert abs(lam - target) < 0.05
    top5 = {label for label, _ in eigenvector_support(G, lam)[:5]}
    assert top5 == {f"c{i}" for i in range(5)}


def test_support_lookup_error():
    G = build_google(three(), 0.85)
    with pytest.raises(EigenvalueLookupError):
        eigenvector_support(G, 0.3 + 0.3j)


# fit_powerlaw


def test_fit_exact_law():
    x = np.arange(1, 50, dtype=float)
    fit = fit_powerlaw(x, x ** -2.0)
    assert fit.slope == pytest.approx(-2, abs=1e-12)
    assert fit.residual < 1e-12


def test_fit_noisy_law():
    rng = np.random.default_rng(7)
    x = np.arange(1, 200, dtype=float)
    y = 3.0 * x ** -0.7 * (1 + 0.01 * rng.standard_normal(x.size))
    assert fit_powerlaw(x, y).slope == pytest.approx(-0.7, abs=0.05)


def test_fit_window_and_positive_only():
    x = np.arange(0, 40, dtype=float)
    y = np.zeros_like(x)
    y[1:] = x[1:] ** -1.5
    y[-1] = 0
    fit = fit_powerlaw(x, y, (0, 30))
    assert fit.slope == pytest.approx(-1.5, abs=1e-12)
    assert fit.n_points == 29 and (fit.start, fit.stop) == (0, 30)


def test_fit_too_few_points():
    with pytest.raises(FitError):
        fit_powerlaw([1.0, 2.0], [1.0, 0.0])


def test_rank_plot_fit():
    p = RankVector(tuple("abcdef"), np.arange(1, 7, dtype=float) ** -1.0)
    assert rank_plot_fit(p).slope == pytest.approx(-1, abs=1e-12)
