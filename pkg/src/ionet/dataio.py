"""CSV codecs for flow matrices, sector vectors, and aggregation maps.

All files are UTF-8 with LF line endings and a header row.

Flow matrix layout::

    sector_id,1,2,3
    1,0.0,2.5,0.1
    2,1.0,0.0,0.3
    3,0.5,0.5,0.0

The header tokens after ``sector_id`` identify the sectors, and each data
row must repeat its sector's token in the first cell, in header order.
Integer tokens must be exactly the set ``1..n`` and get display labels
``Sector k``; any other tokens are treated as opaque codes that double as
labels.  Floats are written with ``repr``, the shortest string that parses
back to the identical double, so write -> read -> write is byte-stable.

Vector files have two columns (``sector_id,value``) and aggregation maps
three (``fine_id,coarse_id,coarse_label``).
"""

from __future__ import annotations

import csv
import io
import os
from typing import IO, Sequence

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    DomainError,
    NonFiniteError,
    ParseError,
    UnmappedSectorError,
)
from .graph import AggregationMap, FlowMatrix, Sector


def format_value(value: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(value))


def _open_read(source) -> tuple[IO[str], bool]:
    if hasattr(source, "read"):
        return source, False
    return open(os.fspath(source), "r", encoding="utf-8", newline=""), True


def _open_write(dest) -> tuple[IO[str], bool]:
    if hasattr(dest, "write"):
        return dest, False
    return open(os.fspath(dest), "w", encoding="utf-8", newline=""), True


def _rows(source) -> list[list[str]]:
    handle, owned = _open_read(source)
    try:
        return list(csv.reader(handle))
    finally:
        if owned:
            handle.close()


def _parse_float(token: str, line: int, column: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"not a number: {token!r}", line, column) from None
    if not np.isfinite(value):
        raise NonFiniteError(f"line {line}, column {column}: non-finite value {token!r}")
    return value


def _sectors_from_codes(codes: Sequence[str], line: int) -> tuple[Sector, ...]:
    seen = set()
    for pos, code in enumerate(codes):
        if code == "":
            raise ParseError("empty sector token", line, pos + 2)
        if code in seen:
            raise ParseError(f"duplicate sector token {code!r}", line, pos + 2)
        seen.add(code)
    if all(_is_int(c) for c in codes):
        ints = [int(c) for c in codes]
        if sorted(ints) != list(range(1, len(codes) + 1)):
            raise ParseError(
                f"integer sector tokens must be exactly 1..{len(codes)}", line, 2
            )
        return tuple(
            Sector(pos, f"Sector {num}", str(num)) for pos, num in enumerate(ints)
        )
    return tuple(Sector(pos, code, code) for pos, code in enumerate(codes))


def _is_int(token: str) -> bool:
    try:
        int(token)
    except ValueError:
        return False
    return True


def parse_matrix_csv(source, transpose: bool = False) -> FlowMatrix:
    """Read a square flow matrix CSV.

    ``transpose`` flips the matrix on read, for files whose rows hold the
    supplying sector rather than the purchasing one.
    """
    rows = _rows(source)
    if not rows:
        raise ParseError("empty file", 1)
    header = rows[0]
    if len(header) < 2 or header[0] != "sector_id":
        raise ParseError("header must start with 'sector_id'", 1, 1)
    codes = header[1:]
    n = len(codes)
    sectors = _sectors_from_codes(codes, 1)
    if len(rows) - 1 != n:
        raise ParseError(
            f"expected {n} data rows to match the header, found {len(rows) - 1}",
            len(rows),
        )
    values = np.empty((n, n), dtype=np.float64)
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise ParseError(
                f"expected {n + 1} cells, found {len(row)}", r, len(row) + 1
            )
        if row[0] != codes[r - 2]:
            raise ParseError(
                f"row token {row[0]!r} does not match header token "
                f"{codes[r - 2]!r}",
                r,
                1,
            )
        for c, token in enumerate(row[1:]):
            value = _parse_float(token, r, c + 2)
            if value < 0:
                raise DomainError(f"line {r}, column {c + 2}: negative flow {token!r}")
            values[r - 2, c] = value
    if transpose:
        values = values.T.copy()
    return FlowMatrix(values, sectors)


def write_flow_matrix(matrix: FlowMatrix, dest) -> None:
    """Write a flow matrix in the documented layout."""
    handle, owned = _open_write(dest)
    try:
        write_matrix_csv(matrix.values, matrix.sectors, handle)
    finally:
        if owned:
            handle.close()


def write_matrix_csv(values: np.ndarray, sectors: Sequence[Sector], dest) -> None:
    """Write any square per-sector-pair matrix with the standard header."""
    handle, owned = _open_write(dest)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        codes = [s.code for s in sectors]
        writer.writerow(["sector_id"] + codes)
        for i, code in enumerate(codes):
            writer.writerow([code] + [format_value(v) for v in values[i]])
    finally:
        if owned:
            handle.close()


def read_sector_vector(source, sectors: Sequence[Sector] | None = None) -> np.ndarray:
    """Read a two-column ``sector_id,value`` file.

    When ``sectors`` is given the rows must list exactly those codes in
    the same order.
    """
    rows = _rows(source)
    if not rows:
        raise ParseError("empty file", 1)
    if len(rows[0]) != 2 or rows[0][0] != "sector_id":
        raise ParseError("header must be 'sector_id,<name>'", 1, 1)
    codes = []
    values = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise ParseError(f"expected 2 cells, found {len(row)}", r)
        codes.append(row[0])
        values.append(_parse_float(row[1], r, 2))
    if sectors is not None:
        expected = [s.code for s in sectors]
        if len(codes) != len(expected):
            raise DimensionMismatchError(
                f"vector lists {len(codes)} sectors, matrix has {len(expected)}"
            )
        for pos, (got, want) in enumerate(zip(codes, expected)):
            if got != want:
                raise UnmappedSectorError(
                    f"vector row {pos + 2} has sector {got!r}, expected {want!r}"
                )
    return np.asarray(values, dtype=np.float64)


def write_sector_vector(values: np.ndarray, sectors: Sequence[Sector], dest,
                        name: str = "value") -> None:
    handle, owned = _open_write(dest)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sector_id", name])
        for sector, value in zip(sectors, values):
            writer.writerow([sector.code, format_value(value)])
    finally:
        if owned:
            handle.close()


def read_rpc(source):
    """Read regional purchase coefficients: a vector or a full matrix.

    Two-column files parse as a per-supplier vector; files in the flow
    matrix layout parse as a cell-by-cell matrix.
    """
    handle, owned = _open_read(source)
    try:
        text = handle.read()
    finally:
        if owned:
            handle.close()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty file", 1)
    if len(rows[0]) == 2:
        return read_sector_vector(io.StringIO(text))
    return parse_matrix_csv(io.StringIO(text)).values


def read_aggregation_map(source, sectors: Sequence[Sector]) -> AggregationMap:
    """Read a ``fine_id,coarse_id,coarse_label`` map covering ``sectors``.

    Coarse sectors are ordered by first appearance.  Every fine sector
    must appear exactly once; labels for the same coarse id must agree.
    """
    rows = _rows(source)
    if not rows:
        raise ParseError("empty file", 1)
    if len(rows[0]) != 3 or rows[0][0] != "fine_id":
        raise ParseError("header must be 'fine_id,coarse_id,coarse_label'", 1, 1)
    fine_codes = {s.code: s.id for s in sectors}
    assigned: dict[int, int] = {}
    coarse_order: list[str] = []
    coarse_labels: dict[str, str] = {}
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ParseError(f"expected 3 cells, found {len(row)}", r)
        fine, coarse, label = row
        if fine not in fine_codes:
            raise UnmappedSectorError(
                f"line {r}: fine sector {fine!r} is not in the matrix"
            )
        fid = fine_codes[fine]
        if fid in assigned:
            raise ParseError(f"fine sector {fine!r} mapped twice", r, 1)
        if coarse not in coarse_labels:
            coarse_labels[coarse] = label
            coarse_order.append(coarse)
        elif coarse_labels[coarse] != label:
            raise ParseError(
                f"coarse sector {coarse!r} has conflicting labels "
                f"{coarse_labels[coarse]!r} and {label!r}",
                r,
                3,
            )
        assigned[fid] = coarse_order.index(coarse)
    missing = [s.code for s in sectors if s.id not in assigned]
    if missing:
        raise UnmappedSectorError(
            "unmapped fine sector(s): " + ", ".join(repr(c) for c in missing)
        )
    fine_to_coarse = np.array([assigned[i] for i in range(len(sectors))], dtype=np.intp)
    coarse_sectors = tuple(
        Sector(pos, coarse_labels[code], code) for pos, code in enumerate(coarse_order)
    )
    return AggregationMap(fine_to_coarse, coarse_sectors)


def write_score_table(
    sectors: Sequence[Sector],
    columns: Sequence[tuple[str, np.ndarray, np.ndarray]],
    dest,
    formatter=format_value,
) -> None:
    """Write ``sector_id,description,<column...>`` rows.

    ``columns`` holds ``(name, values, undefined_mask)`` triples; undefined
    cells render as ``UNDEF``.
    """
    handle, owned = _open_write(dest)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sector_id", "description"] + [name for name, _, _ in columns])
        for i, sector in enumerate(sectors):
            cells = [
                "UNDEF" if undef[i] else formatter(vals[i])
                for _, vals, undef in columns
            ]
            writer.writerow([sector.code, sector.label] + cells)
    finally:
        if owned:
            handle.close()
