"""Competition ranking, rank tables, and rank correlation."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .base import CentralityVector
from .dataio import _open_write
from .exceptions import (
    DimensionMismatchError,
    NonFiniteError,
    UnknownMeasureError,
)
from .graph import Sector


def competition_rank(
    scores,
    descending: bool = True,
    undefined=None,
) -> np.ndarray:
    """One-based competition ranks ("1224"): ties share the smallest
    position and the following positions are skipped.

    Undefined scores rank behind every defined one, in index order and
    without sharing, so the output is always a permutation-free ranking
    of all entries.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise DimensionMismatchError("scores must be 1-d")
    n = scores.shape[0]
    if undefined is None:
        undefined = np.zeros(n, dtype=bool)
    else:
        undefined = np.asarray(undefined, dtype=bool)
        if undefined.shape != scores.shape:
            raise DimensionMismatchError("undefined mask must match scores")
    if not np.isfinite(scores[~undefined]).all():
        raise NonFiniteError("defined scores must be finite")
    ranks = np.zeros(n, dtype=np.int64)
    defined_idx = np.flatnonzero(~undefined)
    if defined_idx.size:
        vals = scores[defined_idx]
        order = np.argsort(-vals if descending else vals, kind="stable")
        sorted_vals = vals[order]
        rank_of_sorted = np.empty(defined_idx.size, dtype=np.int64)
        for pos in range(defined_idx.size):
            if pos > 0 and sorted_vals[pos] == sorted_vals[pos - 1]:
                rank_of_sorted[pos] = rank_of_sorted[pos - 1]
            else:
                rank_of_sorted[pos] = pos + 1
        ranks[defined_idx[order]] = rank_of_sorted
    next_rank = defined_idx.size + 1
    for i in np.flatnonzero(undefined):
        ranks[i] = next_rank
        next_rank += 1
    return ranks


def rank(scores: CentralityVector, descending: bool = True) -> np.ndarray:
    """Competition ranks for one measure's scores.

    Flagged-undefined sectors rank behind all defined ones, in sector
    order.  See :func:`competition_rank` for the tie convention.
    """
    return competition_rank(scores.scores, descending, scores.undefined)


def top_n(table: "RankTable", measure: str, n: int) -> "RankTable":
    """Sub-table of the ``n`` best rows under one measure's ranks.

    Rows are ordered by rank; rows tied at the cut are taken in sector
    order until ``n`` rows are filled.  All columns are kept.
    """
    if measure not in table.columns:
        raise UnknownMeasureError(
            f"no column {measure!r}; table has {', '.join(table.columns)}"
        )
    j = table.columns.index(measure)
    order = np.lexsort((np.arange(len(table.sectors)), table.ranks[:, j]))
    keep = order[: max(0, int(n))]
    return RankTable(
        tuple(table.sectors[i] for i in keep),
        table.columns,
        table.ranks[keep],
        table.undefined[keep],
    )


def average_ranks(values) -> np.ndarray:
    """One-based ascending ranks with ties sharing their average position."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0], dtype=np.float64)
    i = 0
    n = values.shape[0]
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(a, b) -> float:
    """Rank correlation: Pearson correlation of average ranks.

    Returns NaN when either input is constant.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatchError("inputs must be 1-d and equal length")
    if a.shape[0] < 2:
        raise DimensionMismatchError("need at least two observations")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise NonFiniteError("inputs must be finite")
    ra = average_ranks(a)
    rb = average_ranks(b)
    da = ra - ra.mean()
    db = rb - rb.mean()
    denom = np.sqrt((da * da).sum() * (db * db).sum())
    if denom == 0:
        return float("nan")
    return float((da * db).sum() / denom)


@dataclass(frozen=True)
class RankTable:
    """Per-sector competition ranks across several measures."""

    sectors: tuple[Sector, ...]
    columns: tuple[str, ...]
    ranks: np.ndarray
    undefined: np.ndarray

    def __post_init__(self):
        ranks = np.asarray(self.ranks, dtype=np.int64).copy()
        undefined = np.asarray(self.undefined, dtype=bool).copy()
        if ranks.shape != (len(self.sectors), len(self.columns)):
            raise DimensionMismatchError("ranks shape must be (sectors, columns)")
        if undefined.shape != ranks.shape:
            raise DimensionMismatchError("undefined shape must match ranks")
        ranks.setflags(write=False)
        undefined.setflags(write=False)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "undefined", undefined)
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "columns", tuple(self.columns))

    @classmethod
    def build(
        cls,
        sectors: Sequence[Sector],
        named_vectors: Sequence[tuple[str, CentralityVector]],
    ) -> "RankTable":
        n = len(sectors)
        cols = []
        ranks = np.zeros((n, len(named_vectors)), dtype=np.int64)
        undefined = np.zeros((n, len(named_vectors)), dtype=bool)
        for j, (name, cv) in enumerate(named_vectors):
            if cv.n != n:
                raise DimensionMismatchError(
                    f"column {name!r} scores {cv.n} sectors, table has {n}"
                )
            cols.append(name)
            ranks[:, j] = competition_rank(cv.scores, undefined=cv.undefined)
            undefined[:, j] = cv.undefined
        return cls(tuple(sectors), tuple(cols), ranks, undefined)

    def rows(self) -> list[dict]:
        out = []
        for i, sector in enumerate(self.sectors):
            row: dict = {"sector_id": sector.code, "description": sector.label}
            for j, name in enumerate(self.columns):
                row[name] = "UNDEF" if self.undefined[i, j] else int(self.ranks[i, j])
            out.append(row)
        return out

    def to_csv(self, dest) -> None:
        handle, owned = _open_write(dest)
        try:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["sector_id", "description"] + list(self.columns))
            for row in self.rows():
                writer.writerow([str(row[key]) for key in
                                 ["sector_id", "description"] + list(self.columns)])
        finally:
            if owned:
                handle.close()

    def to_json(self, dest) -> None:
        handle, owned = _open_write(dest)
        try:
            json.dump(self.rows(), handle, indent=2)
            handle.write("\n")
        finally:
            if owned:
                handle.close()
