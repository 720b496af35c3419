"""Column-wise rank transforms that make studies comparable.

Raw intensities from different platforms live on incompatible scales,
so each sample (column) is replaced by a distribution-free score of its
within-column ranks: either the empirical CDF value ``R_i / n`` or the
normal score ``Phi^-1(R_i / (n + 1))``.  Scoring is strictly
column-local and missing entries stay missing.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import AlreadyScoredError
from .matrix import DataMatrix, Dataset
from .numerics import inv_norm_cdf


@dataclass(frozen=True)
class RankVector:
    """Midranks of one column: NaN where the value was missing.

    ``n`` is the number of non-missing entries; the non-missing ranks
    always sum to n(n+1)/2.
    """

    ranks: np.ndarray
    n: int


def _midranks_dense(v: np.ndarray) -> np.ndarray:
    """Midranks of a 1-d array without missing values."""
    _, inverse, counts = np.unique(v, return_inverse=True, return_counts=True)
    # mean rank of each tie run: ranks start after all smaller values
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    mean_ranks = starts + (counts + 1) / 2.0
    return mean_ranks[inverse]


def midrank(column) -> RankVector:
    """Midranks over the non-missing entries of one column.

    Tied values share the mean of the ranks they span, e.g.
    [2, 1, 2] -> [2.5, 1.0, 2.5].
    """
    col = np.asarray(column, dtype=float)
    if col.ndim != 1:
        raise ValueError("midrank expects a 1-d column")
    present = ~np.isnan(col)
    n = int(present.sum())
    if n == 0:
        raise ValueError("column has no non-missing values")
    ranks = np.full(col.shape, np.nan)
    ranks[present] = _midranks_dense(col[present])
    return RankVector(ranks, n)


def ecdf_score(column) -> np.ndarray:
    """Empirical CDF score R_i / n per non-missing entry."""
    r = midrank(column)
    return r.ranks / r.n


def vdw_score(column) -> np.ndarray:
    """Van der Waerden normal score Phi^-1(R_i / (n + 1))."""
    r = midrank(column)
    out = np.full(r.ranks.shape, np.nan)
    present = ~np.isnan(r.ranks)
    out[present] = inv_norm_cdf(r.ranks[present] / (r.n + 1))
    return out


_SCORERS = {"ecdf": ecdf_score, "vdw": vdw_score}


def score_matrix(m: DataMatrix, kind: str) -> DataMatrix:
    """Apply a rank score to every column independently."""
    try:
        scorer = _SCORERS[kind]
    except KeyError:
        raise ValueError(f"unknown score kind {kind!r}; expected 'ecdf' or 'vdw'")
    out = np.empty_like(m.values)
    for j in range(m.n_cols):
        out[:, j] = scorer(m.values[:, j])
    return DataMatrix(m.row_names, m.col_names, out)


def score_dataset(ds: Dataset, kind: str) -> Dataset:
    """Scored copy of a dataset; scoring twice is refused.

    Rank-transforming already transformed values silently degrades the
    scores, so a dataset whose score state is not "none" is rejected.
    """
    if ds.score != "none":
        raise AlreadyScoredError(
            f"dataset {ds.name!r} already carries {ds.score!r} scores")
    return replace(ds, data=score_matrix(ds.data, kind), score=kind)
