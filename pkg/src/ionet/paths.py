"""Shortest-path centralities over impedance-weighted flows.

An edge carrying flow ``w > 0`` has traversal cost ``w ** -alpha``.  With
``alpha = 0`` every edge costs 1 and the measures reduce to their binary
hop-count versions; ``alpha = 1`` sums inverse flows; values between favour
fewer steps, values above 1 favour strong ties even over longer routes.
Self-loops never take part in shortest paths.

Path counts treat two routes as tied when their costs agree to a relative
tolerance of :data:`GEODESIC_RTOL`; this makes exact ties from integer-like
weights well defined without collapsing genuinely distinct costs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import BET, CLO, WBET, WCLO, CentralityEstimator, CentralityVector
from .exceptions import UndefinedScoreError
from .graph import FlowMatrix
from .validation import check_alpha, check_flow_matrix

# Relative tolerance for treating two path costs as equal.
GEODESIC_RTOL = 1e-12

# Weight exponents reported when no explicit choice is made.
DEFAULT_ALPHAS = (0.0, 0.5, 1.0, 1.5)


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise shortest-path costs at a given weight exponent.

    ``values[i, j]`` is the cheapest cost of a directed route from ``i``
    to ``j`` (``inf`` when none exists, 0 on the diagonal).
    """

    values: np.ndarray
    alpha: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def n(self) -> int:
        return self.values.shape[0]


def edge_costs(flows, alpha: float) -> np.ndarray:
    """Per-edge traversal costs ``w ** -alpha``; absent edges cost ``inf``."""
    if isinstance(flows, FlowMatrix):
        values = flows.values
    else:
        values = check_flow_matrix(flows)
    alpha = check_alpha(alpha)
    costs = np.full(values.shape, np.inf, dtype=np.float64)
    pos = values > 0
    with np.errstate(divide="ignore"):
        costs[pos] = values[pos] ** (-alpha)
    np.fill_diagonal(costs, np.inf)
    return costs


def _single_source(costs: np.ndarray, source: int, rtol: float):
    """Dijkstra from ``source`` on a dense cost matrix, counting ties.

    Returns ``(dist, sigma)`` where ``sigma[v]`` is the number of
    minimum-cost routes from ``source`` to ``v`` under the relative tie
    tolerance.  Costs must be positive, which every ``w ** -alpha`` is.
    """
    n = costs.shape[0]
    dist = np.full(n, np.inf, dtype=np.float64)
    sigma = np.zeros(n, dtype=np.float64)
    done = np.zeros(n, dtype=bool)
    dist[source] = 0.0
    sigma[source] = 1.0
    for _ in range(n):
        open_dist = np.where(done, np.inf, dist)
        u = int(np.argmin(open_dist))
        if not np.isfinite(open_dist[u]):
            break
        done[u] = True
        row = costs[u]
        idx = np.flatnonzero(np.isfinite(row) & ~done)
        if idx.size == 0:
            continue
        nd = dist[u] + row[idx]
        old = dist[idx]
        tol = rtol * np.maximum(np.abs(nd), np.where(np.isfinite(old), np.abs(old), 0.0))
        better = nd < old - tol
        tie = ~better & np.isfinite(old) & (np.abs(nd - old) <= tol)
        upd = idx[better]
        dist[upd] = nd[better]
        sigma[upd] = sigma[u]
        sigma[idx[tie]] += sigma[u]
    return dist, sigma


def geodesic_counts(flows, alpha: float, rtol: float = GEODESIC_RTOL):
    """All-pairs shortest costs and minimum-cost route counts.

    Returns ``(DistanceMatrix, sigma)`` with ``sigma[s, t]`` the number of
    tied cheapest routes from ``s`` to ``t`` (``sigma[s, s] = 1``).
    """
    costs = edge_costs(flows, alpha)
    n = costs.shape[0]
    dist = np.empty((n, n), dtype=np.float64)
    sigma = np.empty((n, n), dtype=np.float64)
    for s in range(n):
        dist[s], sigma[s] = _single_source(costs, s, rtol)
    return DistanceMatrix(dist, check_alpha(alpha)), sigma


def weighted_distance(flows, alpha: float) -> DistanceMatrix:
    """All-pairs minimum traversal costs at weight exponent ``alpha``."""
    d, _ = geodesic_counts(flows, alpha)
    return d


def closeness(d, alpha: float | None = None, allow_unreachable: bool = False) -> CentralityVector:
    """Closeness: reciprocal of a sector's total distance to all others.

    ``d`` may be a :class:`DistanceMatrix` or a plain cost matrix plus
    ``alpha``.  A sector that cannot reach every other sector has no
    finite total; that raises :class:`UndefinedScoreError` unless
    ``allow_unreachable`` is set, in which case the sum runs over the
    reachable sectors only and the score is still flagged undefined.
    """
    if isinstance(d, DistanceMatrix):
        values, alpha = d.values, d.alpha
    else:
        values = np.asarray(d, dtype=np.float64)
        alpha = check_alpha(0.0 if alpha is None else alpha)
    n = values.shape[0]
    finite = np.isfinite(values)
    undefined = ~finite.all(axis=1)
    if undefined.any() and not allow_unreachable:
        bad = int(np.flatnonzero(undefined)[0])
        raise UndefinedScoreError(
            f"sector {bad} cannot reach every other sector; no finite "
            "closeness exists (pass allow_unreachable to mark it UNDEF)"
        )
    sums = np.where(finite, values, 0.0).sum(axis=1)
    scores = np.full(n, np.nan, dtype=np.float64)
    ok = sums > 0
    scores[ok] = 1.0 / sums[ok]
    undefined = undefined | ~ok
    tag = CLO if alpha == 0 else WCLO
    return CentralityVector(tag, scores, undefined, {"alpha": alpha})


def betweenness(
    flows,
    alpha: float,
    normalize: bool = False,
    rtol: float = GEODESIC_RTOL,
) -> CentralityVector:
    """Betweenness: each sector's share of others' cheapest routes.

    For every ordered pair ``(j, k)`` of distinct sectors with at least
    one route, sector ``i`` (distinct from both) earns the fraction of
    minimum-cost routes that pass through it.  Pairs with no route simply
    contribute nothing.  ``normalize=True`` divides by ``(n-1)(n-2)``,
    the number of pairs a sector could serve.
    """
    d, sigma = geodesic_counts(flows, alpha, rtol)
    values = d.values
    n = values.shape[0]
    scores = np.zeros(n, dtype=np.float64)
    finite = np.isfinite(values)
    for i in range(n):
        left = values[:, i]
        right = values[i, :]
        lhs = left[:, None] + right[None, :]
        ok = np.isfinite(left)[:, None] & np.isfinite(right)[None, :] & finite
        with np.errstate(invalid="ignore"):
            tol = rtol * np.maximum(np.abs(lhs), np.abs(values))
            on_path = ok & (np.abs(lhs - values) <= tol)
        counts = sigma[:, i][:, None] * sigma[i, :][None, :]
        contrib = np.zeros((n, n), dtype=np.float64)
        np.divide(counts, sigma, out=contrib, where=on_path & (sigma > 0))
        contrib[i, :] = 0.0
        contrib[:, i] = 0.0
        np.fill_diagonal(contrib, 0.0)
        scores[i] = contrib.sum()
    meta = {"alpha": d.alpha, "normalized": bool(normalize)}
    if normalize:
        pairs = (n - 1) * (n - 2)
        scores = scores / pairs if pairs > 0 else np.zeros(n, dtype=np.float64)
    tag = BET if d.alpha == 0 else WBET
    return CentralityVector(tag, scores, np.zeros(n, dtype=bool), meta)


class WeightedCloseness(CentralityEstimator):
    """Estimator computing closeness over impedance-weighted flows.

    Parameters
    ----------
    alpha : float, default 1.0
        Weight exponent; 0 gives the binary hop-count measure.
    allow_unreachable : bool, default False
        Mark sectors with no finite total distance as undefined instead
        of raising.
    """

    def __init__(self, alpha: float = 1.0, allow_unreachable: bool = False):
        self.alpha = alpha
        self.allow_unreachable = allow_unreachable

    def fit(self, X, y=None):
        self.distances_ = weighted_distance(X, self.alpha)
        self._set_result(closeness(self.distances_, allow_unreachable=self.allow_unreachable))
        return self


class WeightedBetweenness(CentralityEstimator):
    """Estimator computing route-share betweenness over weighted flows.

    Parameters
    ----------
    alpha : float, default 1.0
        Weight exponent; 0 gives the binary hop-count measure.
    normalize : bool, default False
        Divide scores by ``(n-1)(n-2)``.
    """

    def __init__(self, alpha: float = 1.0, normalize: bool = False):
        self.alpha = alpha
        self.normalize = normalize

    def fit(self, X, y=None):
        self._set_result(betweenness(X, self.alpha, normalize=self.normalize))
        return self
