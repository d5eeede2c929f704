"""Sector network types and structural operations.

A :class:`FlowMatrix` holds the dense nonnegative flows between sectors,
with entry ``(i, j)`` read as the flow supporting sector ``i``'s activity
that is purchased from sector ``j``.  Normalising each row by its sum
yields the :class:`TransitionMatrix` of the random walk, where a step
moves from a sector to one of its suppliers with probability equal to the
supplier's share of the purchasing sector's inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .exceptions import (
    DanglingSectorError,
    DimensionMismatchError,
    OutOfRangeError,
    UnmappedSectorError,
)
from .validation import check_flow_matrix, check_index, check_transition_matrix


@dataclass(frozen=True)
class Sector:
    """One economic sector: positional id, display label, source code.

    ``id`` is the zero-based position inside the matrices.  ``code`` is
    the identifier token from the data source (kept verbatim so files
    round-trip byte for byte); it defaults to the one-based position.
    """

    id: int
    label: str
    code: str = ""

    def __post_init__(self):
        if not self.code:
            object.__setattr__(self, "code", str(self.id + 1))


def default_sectors(n: int) -> tuple[Sector, ...]:
    return tuple(Sector(i, f"Sector {i + 1}") for i in range(n))


def _coerce_sectors(n: int, sectors) -> tuple[Sector, ...]:
    if sectors is None:
        return default_sectors(n)
    sectors = tuple(sectors)
    if len(sectors) != n:
        raise DimensionMismatchError(
            f"got {len(sectors)} sectors for a matrix of size {n}"
        )
    return sectors


class _DenseMatrix:
    """Immutable dense square matrix with attached sector metadata."""

    __slots__ = ("_values", "_sectors")

    def __init__(self, values: np.ndarray, sectors: tuple[Sector, ...]):
        values.setflags(write=False)
        self._values = values
        self._sectors = sectors

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def sectors(self) -> tuple[Sector, ...]:
        return self._sectors

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self._sectors)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class FlowMatrix(_DenseMatrix):
    """Dense nonnegative flows between ``n`` sectors.  Self-loops allowed."""

    def __init__(self, values, sectors: Sequence[Sector] | None = None):
        arr = check_flow_matrix(values)
        super().__init__(arr, _coerce_sectors(arr.shape[0], sectors))

    def with_values(self, values) -> "FlowMatrix":
        """Same sectors, new values."""
        return FlowMatrix(values, self._sectors)

    def support(self) -> np.ndarray:
        """Boolean matrix of edges carrying positive flow."""
        return self._values > 0


class TransitionMatrix(_DenseMatrix):
    """Row-stochastic matrix of walk probabilities between sectors."""

    def __init__(self, values, sectors: Sequence[Sector] | None = None):
        arr = check_transition_matrix(values)
        super().__init__(arr, _coerce_sectors(arr.shape[0], sectors))

    def support(self) -> np.ndarray:
        return self._values > 0


@dataclass(frozen=True)
class DeflatedTransition:
    """A transition matrix with one sector's row and column removed.

    ``kept`` maps the positions of the reduced matrix back to the sector
    indices of the original one.  Entries are copied bit for bit; nothing
    is renormalised, so rows that pointed at the removed sector now sum
    to less than one.
    """

    values: np.ndarray
    removed: int
    kept: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).copy()
        kept = np.asarray(self.kept, dtype=np.intp).copy()
        values.setflags(write=False)
        kept.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kept", kept)


def build_transition(flows: FlowMatrix | np.ndarray) -> TransitionMatrix:
    """Normalise each row of a flow matrix by its own sum.

    Raises
    ------
    DanglingSectorError
        If any sector has zero total outgoing flow, since no probability
        row exists for it.
    """
    if not isinstance(flows, FlowMatrix):
        flows = FlowMatrix(flows)
    totals = flows.values.sum(axis=1)
    dangling = np.flatnonzero(totals == 0)
    if dangling.size:
        raise DanglingSectorError(dangling)
    probs = flows.values / totals[:, None]
    return TransitionMatrix(probs, flows.sectors)


def deflate(m: TransitionMatrix | np.ndarray, target: int) -> DeflatedTransition:
    """Remove ``target``'s row and column, preserving the order of the rest."""
    if isinstance(m, TransitionMatrix):
        values = m.values
    else:
        values = check_transition_matrix(m)
    n = values.shape[0]
    target = check_index(target, n, "target sector")
    if n < 2:
        raise OutOfRangeError("cannot deflate a 1-sector network")
    kept = np.array([i for i in range(n) if i != target], dtype=np.intp)
    reduced = values[np.ix_(kept, kept)].copy()
    return DeflatedTransition(reduced, target, kept)


@dataclass(frozen=True)
class AggregationMap:
    """Total map from fine sector positions to coarse sector positions."""

    fine_to_coarse: np.ndarray
    coarse_sectors: tuple[Sector, ...]

    def __post_init__(self):
        arr = np.asarray(self.fine_to_coarse, dtype=np.intp).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "fine_to_coarse", arr)
        m = len(self.coarse_sectors)
        if arr.ndim != 1:
            raise DimensionMismatchError("fine_to_coarse must be 1-d")
        if arr.size and ((arr < 0) | (arr >= m)).any():
            bad = int(arr[(arr < 0) | (arr >= m)][0])
            raise UnmappedSectorError(
                f"coarse index {bad} outside [0, {m})"
            )
        used = np.zeros(m, dtype=bool)
        used[arr] = True
        if not used.all():
            missing = int(np.flatnonzero(~used)[0])
            raise UnmappedSectorError(
                f"coarse sector {missing} receives no fine sectors"
            )

    @property
    def n_fine(self) -> int:
        return self.fine_to_coarse.shape[0]

    @property
    def n_coarse(self) -> int:
        return len(self.coarse_sectors)


def aggregate(flows: FlowMatrix, mapping: AggregationMap) -> FlowMatrix:
    """Sum fine flows into coarse cells: coarse[(g, h)] = sum over
    fine pairs (i, j) with i in g and j in h.  Total flow is preserved
    exactly up to float addition order."""
    if not isinstance(flows, FlowMatrix):
        flows = FlowMatrix(flows)
    if mapping.n_fine != flows.n:
        raise DimensionMismatchError(
            f"aggregation map covers {mapping.n_fine} sectors, "
            f"matrix has {flows.n}"
        )
    m = mapping.n_coarse
    idx = mapping.fine_to_coarse
    coarse = np.zeros((m, m), dtype=np.float64)
    np.add.at(coarse, (idx[:, None], idx[None, :]), flows.values)
    return FlowMatrix(coarse, mapping.coarse_sectors)


@dataclass(frozen=True)
class ReachabilityReport:
    """Pairwise reachability of the walk's support graph.

    ``reachable[i, j]`` is True when a directed path with positive
    probability runs from ``i`` to ``j``.  The diagonal is True.
    """

    reachable: np.ndarray

    def __post_init__(self):
        reachable = np.asarray(self.reachable, dtype=bool).copy()
        reachable.setflags(write=False)
        object.__setattr__(self, "reachable", reachable)

    @property
    def n(self) -> int:
        return self.reachable.shape[0]

    def sources_missing_target(self, target: int) -> np.ndarray:
        """Sector indices that cannot reach ``target``."""
        target = check_index(target, self.n, "target sector")
        return np.flatnonzero(~self.reachable[:, target])

    @property
    def strongly_connected(self) -> bool:
        return bool(self.reachable.all())


def check_reachability(m) -> ReachabilityReport:
    """Compute pairwise reachability over positive-probability edges."""
    if isinstance(m, (TransitionMatrix, FlowMatrix)):
        support = m.support()
    else:
        support = np.asarray(m) > 0
    n = support.shape[0]
    graph = csr_matrix(support.astype(np.float64))
    dist = shortest_path(graph, method="D", unweighted=True, directed=True)
    reachable = np.isfinite(dist)
    np.fill_diagonal(reachable, True)
    return ReachabilityReport(reachable)


def subset(flows: FlowMatrix, keep) -> FlowMatrix:
    """Restrict a flow matrix to the given sector indices, renumbering
    positions but keeping labels and codes."""
    if not isinstance(flows, FlowMatrix):
        flows = FlowMatrix(flows)
    keep = np.asarray(keep, dtype=np.intp)
    reduced = flows.values[np.ix_(keep, keep)]
    sectors = tuple(
        Sector(pos, flows.sectors[i].label, flows.sectors[i].code)
        for pos, i in enumerate(keep)
    )
    return FlowMatrix(reduced, sectors)


def drop_isolated(flows: FlowMatrix) -> tuple[FlowMatrix, tuple[int, ...]]:
    """Remove sectors with no positive flow in or out (self-loops count).

    Returns the reduced matrix and the original indices that were removed.
    """
    if not isinstance(flows, FlowMatrix):
        flows = FlowMatrix(flows)
    support = flows.support()
    isolated = ~(support.any(axis=1) | support.any(axis=0))
    removed = tuple(int(i) for i in np.flatnonzero(isolated))
    if not removed:
        return flows, ()
    return subset(flows, np.flatnonzero(~isolated)), removed
