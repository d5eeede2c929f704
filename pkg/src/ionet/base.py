"""Shared result container and the estimator base class."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import DimensionMismatchError

# Canonical measure tags.  Path measures use the plain tag at alpha = 0 and
# the weighted tag otherwise.
RWC = "rwc"
CBET = "cbet"
CLO = "clo"
BET = "bet"
WCLO = "wclo"
WBET = "wbet"
OUTMULT = "outmult"
EMPMULT = "empmult"

MEASURE_TAGS = (RWC, CBET, CLO, BET, WCLO, WBET, OUTMULT, EMPMULT)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CentralityVector:
    """One score per sector for a single measure.

    ``undefined`` marks sectors whose score does not exist (for example a
    sector that cannot be reached, or an employment ratio with a zero
    denominator).  Undefined entries hold NaN in ``scores`` and are ranked
    behind every defined score.
    """

    measure: str
    scores: np.ndarray
    undefined: np.ndarray
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        scores = _frozen(np.asarray(self.scores, dtype=np.float64))
        undefined = _frozen(np.asarray(self.undefined, dtype=bool))
        if scores.ndim != 1 or undefined.shape != scores.shape:
            raise DimensionMismatchError(
                "scores and undefined must be 1-d arrays of equal length"
            )
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "undefined", undefined)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    def defined_scores(self) -> np.ndarray:
        return self.scores[~self.undefined]


def defined_vector(measure: str, scores, meta: Mapping[str, Any] | None = None) -> CentralityVector:
    """Build a vector where every score is defined."""
    scores = np.asarray(scores, dtype=np.float64)
    return CentralityVector(
        measure, scores, np.zeros(scores.shape[0], dtype=bool), meta or {}
    )


class CentralityEstimator(BaseEstimator):
    """Base for estimators that map a flow matrix to per-sector scores.

    Subclasses implement :meth:`fit`, which must populate ``centrality_``
    via :meth:`_set_result` and return ``self``.
    """

    def fit(self, X, y=None):
        raise NotImplementedError

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X, y).scores_

    def transform(self, X=None) -> np.ndarray:
        """Return the fitted scores; ``X`` is accepted for pipeline use."""
        self._check_fitted()
        return self.scores_

    def _set_result(self, result: CentralityVector) -> None:
        self.centrality_ = result
        self.scores_ = result.scores
        self.undefined_ = result.undefined

    def _check_fitted(self) -> None:
        if not hasattr(self, "centrality_"):
            raise AttributeError(
                f"{type(self).__name__} is not fitted yet; call fit first"
            )
