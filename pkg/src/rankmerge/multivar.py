"""Principal components for sample maps and dataset factor plots."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class PcaResult:
    """Eigenvalues (descending), orthonormal loadings (variables x
    components), scores (individuals x components), and the centering /
    scaling applied to each variable."""

    eigenvalues: np.ndarray
    loadings: np.ndarray
    scores: np.ndarray
    centers: np.ndarray
    scalings: np.ndarray


def pca(data, scale: bool = False) -> PcaResult:
    """PCA of an individuals x variables matrix.

    Columns are centered (and unit-variance scaled when ``scale`` is
    true, which makes the decomposition act on the correlation matrix).
    The covariance uses the n - 1 divisor and a symmetric eigensolver;
    tiny negative eigenvalues from rounding are clamped to zero.  Sign
    convention: in every loading column the entry of largest magnitude
    is positive, which pins an otherwise arbitrary global sign.
    """
    x = np.array(data, dtype=float)
    if x.ndim != 2:
        raise ValueError("data must be 2-d (individuals x variables)")
    n, _ = x.shape
    if n < 2:
        raise ValueError("need at least two individuals")
    if np.isnan(x).any():
        raise ValueError("missing values are not supported here; filter first")

    centers = x.mean(axis=0)
    x -= centers
    if scale:
        scalings = x.std(axis=0, ddof=1)
        if np.any(scalings == 0.0):
            bad = int(np.argmax(scalings == 0.0))
            raise ValueError(f"variable {bad} is constant; cannot scale")
        x /= scalings
    else:
        scalings = np.ones(x.shape[1])

    cov = (x.T @ x) / (n - 1)
    eigenvalues, vectors = np.linalg.eigh(cov)
    eigenvalues = eigenvalues[::-1]
    vectors = vectors[:, ::-1]
    if np.any(eigenvalues < -1e-10 * max(1.0, float(eigenvalues.max(initial=0.0)))):
        raise ArithmeticError("covariance matrix not positive semi-definite")
    eigenvalues = np.maximum(eigenvalues, 0.0)

    for c in range(vectors.shape[1]):
        peak = int(np.argmax(np.abs(vectors[:, c])))
        if vectors[peak, c] < 0.0:
            vectors[:, c] = -vectors[:, c]

    scores = x @ vectors
    return PcaResult(eigenvalues, vectors, scores, centers, scalings)


def project_first_plane(result: PcaResult, labels: Sequence[str],
                        names: Sequence[str] | None = None
                        ) -> list[tuple[str, float, float, str]]:
    """(name, PC1, PC2, label) per individual from a fitted PCA."""
    if result.scores.shape[1] < 2:
        raise ValueError("need at least two components to project a plane")
    n = result.scores.shape[0]
    if len(labels) != n:
        raise ValueError("one label per individual required")
    if names is None:
        names = [str(i) for i in range(n)]
    elif len(names) != n:
        raise ValueError("one name per individual required")
    return [(str(names[i]), float(result.scores[i, 0]),
             float(result.scores[i, 1]), str(labels[i])) for i in range(n)]


def factor_plot_medians(medians, dataset_names: Sequence[str]
                        ) -> list[tuple[str, float, float]]:
    """First factorial plane of dataset median vectors.

    ``medians`` is features x datasets.  PCA runs on the correlation
    matrix (scaled PCA with the datasets as variables), so each dataset
    gets the first two entries of the orthonormal loading vectors as
    its plane coordinates; mirrored datasets land diametrically
    opposed.  A constant median vector has no correlation structure and
    is rejected by name.
    """
    x = np.asarray(medians, dtype=float)
    if x.ndim != 2:
        raise ValueError("medians must be 2-d (features x datasets)")
    n_feat, n_ds = x.shape
    if n_ds != len(dataset_names):
        raise ValueError("one name per dataset column required")
    if n_ds < 3 or n_feat < 3:
        raise ValueError("need at least 3 datasets and 3 features")
    sd = x.std(axis=0, ddof=1)
    if np.any(sd == 0.0):
        bad = dataset_names[int(np.argmax(sd == 0.0))]
        raise ValueError(f"median vector of dataset {bad!r} is constant")
    result = pca(x, scale=True)
    return [(str(dataset_names[j]), float(result.loadings[j, 0]),
             float(result.loadings[j, 1])) for j in range(n_ds)]
