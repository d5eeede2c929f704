"""Input requirement multipliers and absorption-matrix transforms.

The absorption matrix ``A`` holds input coefficients: entry ``(i, j)`` is
the amount purchased from sector ``j`` per unit of activity in sector
``i``.  Requirements accumulate over rounds of purchasing, so the total
requirement matrix is the series ``I + A + A^2 + ... = (I - A)^-1``,
which converges exactly when the spectral radius of ``A`` is below one.
"""

from __future__ import annotations

import numpy as np

from .base import EMPMULT, OUTMULT, CentralityEstimator, CentralityVector, defined_vector
from .exceptions import DataError, NonProductiveError
from .graph import FlowMatrix
from .validation import (
    check_flow_matrix,
    check_unit_interval,
    check_vector,
)

# Max-norm residual accepted when solving for the requirement matrix.
DEFAULT_TOL = 1e-9


def _values_of(x) -> np.ndarray:
    if isinstance(x, FlowMatrix):
        return x.values
    return check_flow_matrix(x)


def apply_rpc(flows, rpc):
    """Scale flows by regional purchase coefficients in [0, 1].

    A vector coefficient applies to its supplying sector, scaling that
    sector's column; a full matrix scales cell by cell.  Returns the same
    kind of object it was given.
    """
    values = _values_of(flows)
    n = values.shape[0]
    coeff = np.asarray(rpc, dtype=np.float64)
    if coeff.ndim == 1:
        coeff = check_vector(coeff, n, "rpc vector")
        check_unit_interval(coeff, "rpc vector")
        scaled = values * coeff[None, :]
    elif coeff.ndim == 2 and coeff.shape == values.shape:
        coeff = check_flow_matrix(coeff, "rpc matrix")
        check_unit_interval(coeff, "rpc matrix")
        scaled = values * coeff
    else:
        raise DataError(
            f"rpc must be a length-{n} vector or {n}x{n} matrix, "
            f"got shape {coeff.shape}"
        )
    if isinstance(flows, FlowMatrix):
        return flows.with_values(scaled)
    return scaled


def regional_inputs(absorption, output):
    """Turn absorption coefficients into flows by scaling each row by the
    purchasing sector's total output."""
    values = _values_of(absorption)
    n = values.shape[0]
    out = check_vector(output, n, "output vector")
    if (out < 0).any():
        raise DataError("output vector has negative entries")
    scaled = values * out[:, None]
    if isinstance(absorption, FlowMatrix):
        return absorption.with_values(scaled)
    return scaled


def leontief_inverse(absorption, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Total requirement matrix ``(I - A)^-1``.

    Raises
    ------
    NonProductiveError
        If the spectral radius of ``A`` is 1 or more (the requirement
        series diverges), or if the solve fails its residual check.
    """
    a = _values_of(absorption)
    n = a.shape[0]
    rho = float(np.abs(np.linalg.eigvals(a)).max())
    if rho >= 1.0:
        raise NonProductiveError(
            f"absorption matrix has spectral radius {rho!r} >= 1; "
            "total requirements diverge"
        )
    system = np.eye(n) - a
    ident = np.eye(n)
    try:
        lmat = np.linalg.solve(system, ident)
    except np.linalg.LinAlgError as exc:
        raise NonProductiveError(f"requirement system is singular: {exc}") from None
    resid = float(np.abs(system @ lmat - ident).max())
    if not np.isfinite(resid) or resid > tol:
        raise NonProductiveError(
            f"requirement solve failed the residual check: {resid:.3e} > {tol:.3e}"
        )
    return lmat


def output_multiplier(absorption, tol: float = DEFAULT_TOL) -> CentralityVector:
    """Column sums of the total requirement matrix.

    Entry ``j`` is the total activity generated across all sectors per
    unit of sector ``j``'s own activity, direct plus indirect.
    """
    lmat = leontief_inverse(absorption, tol)
    return defined_vector(OUTMULT, lmat.sum(axis=0))


def employment_multiplier(absorption, employment, tol: float = DEFAULT_TOL) -> CentralityVector:
    """Employment supported per job in each sector.

    ``employment`` holds jobs per unit of activity.  Sector ``j``'s score
    is the employment generated economy-wide per unit of ``j``'s activity
    divided by ``j``'s own coefficient; sectors with a zero coefficient
    have no defined ratio and are marked undefined.
    """
    a = _values_of(absorption)
    n = a.shape[0]
    emp = check_vector(employment, n, "employment vector")
    if (emp < 0).any():
        raise DataError("employment vector has negative entries")
    lmat = leontief_inverse(a, tol)
    generated = emp @ lmat
    undefined = emp == 0
    scores = np.full(n, np.nan, dtype=np.float64)
    ok = ~undefined
    scores[ok] = generated[ok] / emp[ok]
    return CentralityVector(EMPMULT, scores, undefined)


class OutputMultiplier(CentralityEstimator):
    """Estimator computing total requirement column sums.

    Parameters
    ----------
    tol : float, default 1e-9
        Residual bound for the requirement solve.
    """

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        self.requirements_ = leontief_inverse(X, self.tol)
        self._set_result(defined_vector(OUTMULT, self.requirements_.sum(axis=0)))
        return self


class EmploymentMultiplier(CentralityEstimator):
    """Estimator computing per-job employment multipliers.

    ``fit`` takes the absorption matrix as ``X`` and the employment
    coefficient vector as ``y``.
    """

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        if y is None:
            raise DataError("employment coefficients are required as y")
        self._set_result(employment_multiplier(X, y, self.tol))
        return self
