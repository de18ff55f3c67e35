"""Google matrix, PageRank, complex spectrum and log-log power-law fits.

Orientation: the Google matrix is column-stochastic and column ``j`` holds the
transition probabilities *out of* vertex ``j``.  PageRank is therefore a
right eigenvector, ``G @ p == p``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from chordnet.errors import ConfigError, EigenvalueLookupError, EmptyGraphError, FitError, NumericalError
from chordnet.network import ChordGraph

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.85


@dataclass(frozen=True, eq=False)
class GoogleMatrix:
    matrix: np.ndarray
    alpha: float
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class RankVector:
    """Scores indexed by label."""

    labels: tuple[str, ...]
    scores: np.ndarray
    norm: str = "L1"
    iterations: int = 0

    def __len__(self) -> int:
        return len(self.labels)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.scores.tolist()))

    def order(self) -> list[int]:
        """Indices by descending score, ties broken by label."""
        return sorted(range(len(self.labels)), key=lambda i: (-self.scores[i], self.labels[i]))

    def ranking(self) -> list[str]:
        return [self.labels[i] for i in self.order()]

    def ranks(self) -> dict[str, int]:
        return {label: r for r, label in enumerate(self.ranking(), start=1)}

    def top(self, m: int) -> list[str]:
        return self.ranking()[:m]

    def sorted_scores(self) -> np.ndarray:
        return self.scores[self.order()]

    def l2(self) -> "RankVector":
        norm = np.linalg.norm(self.scores)
        if norm == 0:
            raise NumericalError("cannot L2-normalize a zero vector")
        return RankVector(self.labels, self.scores / norm, "L2")


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray  # complex, descending modulus

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.eigenvalues)

    def non_unit(self, tol: float = 1e-8) -> np.ndarray:
        """All eigenvalues except the single one closest to 1."""
        i = int(np.argmin(np.abs(self.eigenvalues - 1)))
        if abs(self.eigenvalues[i] - 1) > tol:
            return self.eigenvalues
        return np.delete(self.eigenvalues, i)


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    start: int
    stop: int
    n_points: int
    residual: float

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "range": [self.start, self.stop],
            "n_points": self.n_points,
            "residual": self.residual,
        }


def build_google(g: ChordGraph, alpha: float = DEFAULT_ALPHA) -> GoogleMatrix:
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
    n = g.n
    if n == 0:
        raise EmptyGraphError("Google matrix of an empty graph")
    w = g.weights.T.astype(float)  # column j: transitions out of j
    out = w.sum(axis=0)
    s = np.empty_like(w)
    dangling = out == 0
    s[:, ~dangling] = w[:, ~dangling] / out[~dangling]
    s[:, dangling] = 1.0 / n
    return GoogleMatrix(alpha * s + (1.0 - alpha) / n, alpha, g.labels)


def transition_matrix(g: ChordGraph) -> np.ndarray:
    """The column-stochastic S, i.e. the Google matrix at alpha = 1."""
    return build_google(g, 1.0).matrix


def pagerank(G: GoogleMatrix, tol: float = 1e-12, max_iter: int = 100_000) -> RankVector:
    """Power iteration from the uniform vector.

    Stops once the L1 distance between successive iterates drops below ``tol``.
    """
    n = G.n
    m = G.matrix
    p = np.full(n, 1.0 / n)
    diff = np.inf
    for it in range(1, max_iter + 1):
        nxt = m @ p
        nxt /= nxt.sum()
        diff = np.abs(nxt - p).sum()
        p = nxt
        if diff < tol:
            return RankVector(G.labels, p, "L1", it)
    raise NumericalError(f"PageRank did not converge after {max_iter} iterations (residual {diff:.3e})")


def _sort_key_order(values: np.ndarray) -> np.ndarray:
    # descending modulus, then real part, then imaginary part; rounding keeps
    # conjugate pairs and near-ties in a platform-independent order
    mod = np.round(np.abs(values), 10)
    re = np.round(values.real, 10)
    im = np.round(values.imag, 10)
    return np.lexsort((-im, -re, -mod))


def spectrum(G: GoogleMatrix) -> Spectrum:
    try:
        values = np.linalg.eigvals(G.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    return Spectrum(values[_sort_key_order(values)])


def eigenvector_support(G: GoogleMatrix, eigenvalue: complex, tol: float = 1e-6) -> list[tuple[str, float]]:
    """Labels ranked by the modulus of their component in the right eigenvector.

    Amplitudes are taken from the unit-L2 eigenvector.
    """
    try:
        values, vectors = np.linalg.eig(G.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    distance = np.abs(values - eigenvalue)
    i = int(np.argmin(distance))
    if distance[i] > tol:
        raise EigenvalueLookupError(f"{eigenvalue} is not an eigenvalue (closest {values[i]}, distance {distance[i]:.2e})")
    amplitude = np.abs(vectors[:, i])
    amplitude /= np.linalg.norm(amplitude)
    order = sorted(range(G.n), key=lambda k: (-round(amplitude[k], 12), G.labels[k]))
    return [(G.labels[k], float(amplitude[k])) for k in order]


def fit_powerlaw(x: Sequence[float], y: Sequence[float], window: tuple[int, int | None] = (0, None)) -> PowerLawFit:
    """Least-squares line through (log x, log y) on points ``window[0]:window[1]``.

    Non-positive points inside the window are dropped.  ``residual`` is the RMS
    of the log10 residuals.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise FitError("x and y differ in length")
    start, stop = window
    stop = len(x) if stop is None else min(stop, len(x))
    xs, ys = x[start:stop], y[start:stop]
    keep = (xs > 0) & (ys > 0)
    xs, ys = np.log10(xs[keep]), np.log10(ys[keep])
    if len(xs) < 2 or np.ptp(xs) == 0:
        raise FitError(f"need at least 2 distinct positive points in window [{start}, {stop}), got {len(xs)}")
    design = np.column_stack([xs, np.ones_like(xs)])
    (slope, intercept), *_ = np.linalg.lstsq(design, ys, rcond=None)
    resid = ys - (slope * xs + intercept)
    return PowerLawFit(float(slope), float(intercept), start, stop, int(len(xs)), float(np.sqrt(np.mean(resid**2))))


def rank_plot_fit(p: RankVector, window: tuple[int, int | None] = (0, 200)) -> PowerLawFit:
    """Slope of sorted scores against rank (ranks start at 1)."""
    values = p.sorted_scores()
    return fit_powerlaw(np.arange(1, len(values) + 1), values, window)
