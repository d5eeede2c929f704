"""Random-walk centralities via absorbing-chain linear algebra.

For a target sector ``k`` the walk is made absorbing at ``k`` by deleting
row and column ``k`` from the transition matrix, leaving the substochastic
block ``Q``.  Mean first passage times into ``k`` solve

    (I - Q) h = 1

and expected visit counts are entries of the fundamental matrix
``F = (I - Q)^-1``.  Systems are solved by LU factorisation with partial
pivoting, one factorisation per target, reused for every right-hand side.
Each solution is accepted only if its residual is within ``tol``.

A target's system is singular exactly when some sector cannot reach the
target almost surely.  By default that raises
:class:`~ionet.exceptions.SingularSystemError`; with
``allow_unreachable=True`` the affected quantities become infinite (or are
dropped from aggregate scores) instead, and only the sectors that do reach
the target almost surely enter the reduced, nonsingular system.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .base import CBET, RWC, CentralityEstimator, CentralityVector
from .exceptions import (
    DimensionMismatchError,
    IllConditionedWarning,
    SingularSystemError,
    UndefinedScoreError,
)
from .graph import TransitionMatrix, build_transition, check_reachability
from .validation import check_index, check_transition_matrix

# Accept a solve only if the max-norm residual is at most this.
DEFAULT_TOL = 1e-9

# Warn when the 1-norm condition estimate of (I - Q) exceeds this.
COND_LIMIT = 1e12


def _as_values(m) -> np.ndarray:
    if isinstance(m, TransitionMatrix):
        return m.values
    return check_transition_matrix(m)


def _reaches_set(support: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    """Mask of nodes with a directed path into ``seeds`` (seeds included).

    Runs one reverse breadth-first search from a virtual node wired to
    every seed, so the cost is one traversal regardless of seed count.
    """
    m = support.shape[0]
    mask = np.zeros(m, dtype=bool)
    if seeds.size == 0 or m == 0:
        return mask
    big = np.zeros((m + 1, m + 1), dtype=bool)
    big[:m, :m] = support.T
    big[m, seeds] = True
    order = breadth_first_order(
        csr_matrix(big), m, directed=True, return_predecessors=False
    )
    order = order[order < m]
    mask[order] = True
    return mask


class _TargetSystem:
    """The absorbing system for one target: factorisation plus bookkeeping.

    ``good`` holds the original indices of sectors that reach the target
    almost surely; they are the rows/columns of the factored block.
    ``bad`` holds the rest (excluding the target itself).
    """

    __slots__ = ("target", "good", "bad", "lu", "matrix")

    def __init__(self, values: np.ndarray, reach_to_target: np.ndarray, target: int):
        n = values.shape[0]
        others = np.concatenate(
            (np.arange(target, dtype=np.intp), np.arange(target + 1, n, dtype=np.intp))
        )
        cannot = others[~reach_to_target[others]]
        if cannot.size:
            sub_support = values[np.ix_(others, others)] > 0
            pos = {int(o): p for p, o in enumerate(others)}
            seed_pos = np.array([pos[int(c)] for c in cannot], dtype=np.intp)
            doomed = _reaches_set(sub_support, seed_pos)
            good = others[~doomed]
            bad = others[doomed]
        else:
            good = others
            bad = np.empty(0, dtype=np.intp)
        self.target = target
        self.good = good
        self.bad = bad
        block = -values[np.ix_(good, good)]
        block[np.diag_indices_from(block)] += 1.0
        self.matrix = block
        self.lu = None

    def factor(self, tol: float) -> None:
        g = self.good.size
        if g == 0:
            self.lu = None
            return
        anorm = float(np.abs(self.matrix).sum(axis=0).max())
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lu, piv = lu_factor(self.matrix, check_finite=False)
        self.lu = (lu, piv)
        gecon = get_lapack_funcs(("gecon",), (lu,))[0]
        rcond, _ = gecon(lu, anorm, norm="1")
        if rcond == 0 or 1.0 / rcond > COND_LIMIT:
            cond = float("inf") if rcond == 0 else 1.0 / rcond
            warnings.warn(
                f"absorbing system for target {self.target} has condition "
                f"estimate {cond:.3e}",
                category=IllConditionedWarning,
                stacklevel=3,
            )

    def solve(self, rhs: np.ndarray, tol: float, transposed: bool = False) -> np.ndarray:
        x = lu_solve(self.lu, rhs, trans=1 if transposed else 0, check_finite=False)
        a = self.matrix
        resid = (a.T @ x - rhs) if transposed else (a @ x - rhs)
        err = float(np.abs(resid).max()) if resid.size else 0.0
        if not np.isfinite(err) or err > tol:
            raise SingularSystemError(
                f"solve for target {self.target} failed the residual check: "
                f"{err:.3e} > {tol:.3e}",
                target=self.target,
            )
        return x


def _build_system(
    values: np.ndarray,
    reachable_to: np.ndarray,
    target: int,
    tol: float,
    allow_unreachable: bool,
) -> _TargetSystem:
    sys_ = _TargetSystem(values, reachable_to, target)
    if sys_.bad.size and not allow_unreachable:
        raise SingularSystemError(
            f"target {target} is not reached almost surely from sector(s) "
            + ", ".join(str(int(b)) for b in sys_.bad),
            target=target,
            sector_ids=sys_.bad,
        )
    sys_.factor(tol)
    return sys_


def mfpt_to_target(
    m,
    target: int,
    tol: float = DEFAULT_TOL,
    allow_unreachable: bool = False,
) -> np.ndarray:
    """Mean first passage times from every other sector into ``target``.

    Returns ``n - 1`` values ordered by original sector index with the
    target left out (position ``p`` belongs to sector ``p`` when
    ``p < target``, else sector ``p + 1``).  With
    ``allow_unreachable=True``, sectors that do not reach the target
    almost surely get ``inf``; otherwise they raise
    :class:`SingularSystemError`.
    """
    values = _as_values(m)
    n = values.shape[0]
    target = check_index(target, n, "target sector")
    if n < 2:
        raise DimensionMismatchError("need at least two sectors")
    reach = check_reachability(values > 0)
    sys_ = _build_system(values, reach.reachable[:, target], target, tol, allow_unreachable)
    h = np.full(n, np.inf, dtype=np.float64)
    if sys_.good.size:
        x = sys_.solve(np.ones(sys_.good.size), tol)
        h[sys_.good] = x
    keep = np.concatenate((np.arange(target), np.arange(target + 1, n)))
    return h[keep]


def mfpt_matrix(
    m,
    tol: float = DEFAULT_TOL,
    allow_unreachable: bool = False,
    workers: int | None = None,
) -> np.ndarray:
    """Full mean first passage time matrix ``H``.

    ``H[i, j]`` is the expected number of steps a walk starting at ``i``
    takes to first reach ``j``.  The diagonal is fixed at 0.
    """
    h, _ = _sweep(m, tol, allow_unreachable, want_h=True, want_colsums=False,
                  workers=workers)
    return h


def random_walk_centrality(h: np.ndarray, allow_unreachable: bool = False) -> CentralityVector:
    """Closeness-style centrality from a mean first passage time matrix.

    A sector's score is the sector count divided by the total passage
    time into it from everywhere, the reciprocal of the average arrival
    time.  An infinite entry in a sector's column means some source
    never arrives: that raises :class:`UndefinedScoreError` unless
    ``allow_unreachable`` is set, in which case the infinite terms drop
    out of the sum and the score is flagged undefined.
    """
    h = np.asarray(h, dtype=np.float64)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatchError("passage time matrix must be square")
    n = h.shape[0]
    finite = np.isfinite(h)
    undefined = ~finite.all(axis=0)
    if undefined.any() and not allow_unreachable:
        bad = int(np.flatnonzero(undefined)[0])
        raise UndefinedScoreError(
            f"sector {bad} has infinite passage times into it; no defined "
            "score exists (pass allow_unreachable to mark it UNDEF)"
        )
    sums = np.where(finite, h, 0.0).sum(axis=0)
    scores = np.full(n, np.nan, dtype=np.float64)
    ok = sums > 0
    scores[ok] = n / sums[ok]
    undefined = undefined | ~ok
    return CentralityVector(RWC, scores, undefined)


def visit_counts(m, target: int, tol: float = DEFAULT_TOL,
                 allow_unreachable: bool = False) -> np.ndarray:
    """Expected visit counts for walks absorbed at ``target``.

    Entry ``(j, i)`` is the expected number of times a walk from ``j`` to
    ``target`` occupies ``i``, counting the start and the final arrival,
    so column ``target`` is 1 for every valid source and row ``j = target``
    is all zero (no walk).  Sources that do not reach the target almost
    surely get NaN rows when ``allow_unreachable`` is set.
    """
    values = _as_values(m)
    n = values.shape[0]
    target = check_index(target, n, "target sector")
    if n < 2:
        raise DimensionMismatchError("need at least two sectors")
    reach = check_reachability(values > 0)
    sys_ = _build_system(values, reach.reachable[:, target], target, tol, allow_unreachable)
    out = np.zeros((n, n), dtype=np.float64)
    if sys_.bad.size:
        out[sys_.bad, :] = np.nan
    g = sys_.good.size
    if g:
        f = sys_.solve(np.eye(g), tol)
        out[np.ix_(sys_.good, sys_.good)] = f
        out[sys_.good, target] = 1.0
    return out


def counting_betweenness(
    m,
    tol: float = DEFAULT_TOL,
    include_endpoints: bool = True,
    allow_unreachable: bool = False,
    workers: int | None = None,
) -> CentralityVector:
    """Betweenness as the average visit load over all walk pairs.

    Sums expected visits to each sector over every ordered source-target
    pair and divides by ``n * (n - 1)``.  With ``include_endpoints=False``
    the visits a walk pays to its own source and target are left out (the
    denominator is unchanged).  Pairs whose walk is not absorbed almost
    surely raise by default; with ``allow_unreachable=True`` they are
    dropped from the sum and counted in ``meta["dropped_pairs"]``.
    """
    _, cv = _sweep(
        m,
        tol,
        allow_unreachable,
        want_h=False,
        want_colsums=True,
        include_endpoints=include_endpoints,
        workers=workers,
    )
    return cv


def random_walk_profile(
    m,
    tol: float = DEFAULT_TOL,
    allow_unreachable: bool = False,
    workers: int | None = None,
) -> tuple[CentralityVector, CentralityVector, np.ndarray]:
    """Both random-walk measures from one factorisation sweep.

    Returns ``(closeness, betweenness, passage_times)``.  Cheaper than
    calling :func:`mfpt_matrix` and :func:`counting_betweenness`
    separately because each target's LU factorisation is shared.
    """
    h, cv = _sweep(m, tol, allow_unreachable, want_h=True, want_colsums=True,
                   workers=workers)
    return random_walk_centrality(h, allow_unreachable), cv, h


def _solve_target(values, reach_col, target, tol, allow_unreachable,
                  want_h, want_colsums, include_endpoints):
    """All per-target work: build, factor, solve.  Returns plain arrays so
    the sweep can assemble results in fixed target order regardless of
    scheduling."""
    sys_ = _build_system(values, reach_col, target, tol, allow_unreachable)
    g = sys_.good.size
    col = None
    colsums = None
    if want_h and g:
        col = sys_.solve(np.ones(g), tol)
    if want_colsums and g:
        if include_endpoints:
            colsums = sys_.solve(np.ones(g), tol, transposed=True)
        else:
            f = sys_.solve(np.eye(g), tol)
            colsums = f.sum(axis=0) - np.diag(f)
    return sys_.good, sys_.bad.size, col, colsums


def _sweep(
    m,
    tol: float,
    allow_unreachable: bool,
    want_h: bool,
    want_colsums: bool,
    include_endpoints: bool = True,
    workers: int | None = None,
):
    values = _as_values(m)
    n = values.shape[0]
    if n < 2:
        raise DimensionMismatchError("need at least two sectors")
    reach = check_reachability(values > 0)

    def job(target):
        return _solve_target(
            values, reach.reachable[:, target], target, tol, allow_unreachable,
            want_h, want_colsums, include_endpoints,
        )

    if workers and int(workers) > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            results = list(pool.map(job, range(n)))
    else:
        results = [job(target) for target in range(n)]

    h = np.full((n, n), np.inf, dtype=np.float64) if want_h else None
    acc = np.zeros(n, dtype=np.float64) if want_colsums else None
    dropped = 0
    for target, (good, n_bad, col, colsums) in enumerate(results):
        dropped += int(n_bad)
        if want_h:
            h[target, target] = 0.0
            if col is not None:
                h[good, target] = col
        if want_colsums and good.size:
            if colsums is not None:
                acc[good] += colsums
            if include_endpoints:
                # each of the good.size valid walks visits the target once
                acc[target] += good.size
    cv = None
    if want_colsums:
        scores = acc / (n * (n - 1))
        cv = CentralityVector(
            CBET,
            scores,
            np.zeros(n, dtype=bool),
            {"dropped_pairs": dropped, "include_endpoints": include_endpoints},
        )
    return h, cv


def _fit_transition(X) -> TransitionMatrix:
    """Accept a transition matrix as-is, anything else as flows."""
    if isinstance(X, TransitionMatrix):
        return X
    return build_transition(X)


class RandomWalkCloseness(CentralityEstimator):
    """Estimator scoring sectors by mean first passage time into them.

    ``fit`` accepts a flow matrix (normalised internally) or a ready
    :class:`TransitionMatrix`.  After fitting, ``passage_times_`` holds
    the full first-passage matrix and ``scores_`` the per-sector scores.

    Parameters
    ----------
    tol : float, default 1e-9
        Residual bound for each absorbing-chain solve.
    allow_unreachable : bool, default False
        Score over reachable pairs only instead of raising.
    """

    def __init__(self, tol: float = DEFAULT_TOL, allow_unreachable: bool = False):
        self.tol = tol
        self.allow_unreachable = allow_unreachable

    def fit(self, X, y=None):
        self.transition_ = _fit_transition(X)
        self.passage_times_ = mfpt_matrix(
            self.transition_, self.tol, self.allow_unreachable
        )
        self._set_result(
            random_walk_centrality(self.passage_times_, self.allow_unreachable)
        )
        return self


class CountingBetweenness(CentralityEstimator):
    """Estimator scoring sectors by expected walk traffic through them.

    Parameters
    ----------
    tol : float, default 1e-9
        Residual bound for each absorbing-chain solve.
    include_endpoints : bool, default True
        Count the visits a walk pays to its own source and target.
    allow_unreachable : bool, default False
        Drop non-absorbing pairs from the sum instead of raising.
    """

    def __init__(
        self,
        tol: float = DEFAULT_TOL,
        include_endpoints: bool = True,
        allow_unreachable: bool = False,
    ):
        self.tol = tol
        self.include_endpoints = include_endpoints
        self.allow_unreachable = allow_unreachable

    def fit(self, X, y=None):
        self.transition_ = _fit_transition(X)
        self._set_result(
            counting_betweenness(
                self.transition_,
                tol=self.tol,
                include_endpoints=self.include_endpoints,
                allow_unreachable=self.allow_unreachable,
            )
        )
        return self
