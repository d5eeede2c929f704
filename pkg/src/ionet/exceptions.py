"""Error types raised across the package.

Two broad families matter to callers: :class:`DataError` covers malformed
or out-of-domain input, :class:`NumericalError` covers failures of the
linear algebra or simulation itself.  The command line maps the families
to distinct exit codes.
"""

from __future__ import annotations


class IonetError(Exception):
    """Base class for every error raised by this package."""


class DataError(IonetError):
    """Input data is malformed, inconsistent, or out of domain."""


class NumericalError(IonetError):
    """A computation failed: singular system, divergent series, or cap hit."""


class DomainError(DataError):
    """A value lies outside its documented domain (negative flow, bad alpha)."""


class NonFiniteError(DataError):
    """An input contains NaN or infinity."""


class DimensionMismatchError(DataError):
    """Array shapes do not agree (non-square matrix, wrong vector length)."""


class OutOfRangeError(DataError):
    """A sector index or identifier is outside the valid range."""


class DanglingSectorError(DataError):
    """A sector has no outgoing flow, so no transition row can be formed."""

    def __init__(self, sector_ids):
        self.sector_ids = tuple(int(i) for i in sector_ids)
        ids = ", ".join(str(i) for i in self.sector_ids)
        super().__init__(f"sector(s) with zero outgoing flow: {ids}")


class UnmappedSectorError(DataError):
    """An aggregation map does not cover every fine sector."""


class ParseError(DataError):
    """A CSV source could not be parsed.

    Carries the one-based line number and column of the offending token.
    """

    def __init__(self, reason: str, line: int, column: int | None = None):
        self.reason = reason
        self.line = int(line)
        self.column = None if column is None else int(column)
        where = f"line {self.line}"
        if self.column is not None:
            where += f", column {self.column}"
        super().__init__(f"{where}: {reason}")


class UnknownMeasureError(DataError):
    """A measure name is not one of the supported centrality tags."""


class SingularSystemError(NumericalError):
    """An absorbing-chain system is singular for the given target."""

    def __init__(self, message: str, target: int | None = None, sector_ids=()):
        self.target = target
        self.sector_ids = tuple(int(i) for i in sector_ids)
        super().__init__(message)


class NonProductiveError(NumericalError):
    """The absorption matrix has spectral radius at or above one."""


class UndefinedScoreError(NumericalError):
    """A requested score is undefined and strict handling was requested."""


class CapExceededError(NumericalError):
    """Simulated walks hit the step cap before absorption."""

    def __init__(self, truncated: int, total: int, max_steps: int):
        self.truncated = int(truncated)
        self.total = int(total)
        self.max_steps = int(max_steps)
        frac = self.truncated / self.total if self.total else 0.0
        super().__init__(
            f"{self.truncated} of {self.total} walks ({frac:.2%}) exceeded "
            f"the step cap of {self.max_steps}"
        )


class IllConditionedWarning(UserWarning):
    """A linear system is solvable but badly conditioned."""
