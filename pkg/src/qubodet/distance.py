"""Mahalanobis distances under a ridge-regularized covariance model.

The model is fitted once on the full dataset and shared by the point-to-
centroid distances (linear evidence) and the pairwise distances (density
evidence). Euclidean geometry is the special case inv_cov = I.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .dataset import Dataset

__all__ = [
    "CovarianceModel",
    "SingularCovarianceError",
    "fit_covariance",
    "mahalanobis_to_centroid",
    "pairwise_mahalanobis",
]

# Relative eigenvalue cutoff below which the covariance counts as singular.
_SINGULAR_RTOL = 1e-12


class SingularCovarianceError(ValueError):
    """The (regularized) covariance matrix is not invertible."""


@dataclass(frozen=True)
class CovarianceModel:
    """Centroid plus inverse covariance, the metric tensor for distances.

    Attributes:
        mean: length-D centroid of the fitted data.
        inv_cov: D x D symmetric positive-definite inverse covariance.
        ridge: dimensionless regularization strength actually applied.
    """

    mean: np.ndarray
    inv_cov: np.ndarray
    ridge: float

    def __post_init__(self) -> None:
        mean = np.array(self.mean, dtype=np.float64)
        inv_cov = np.array(self.inv_cov, dtype=np.float64)
        if mean.ndim != 1:
            raise ValueError(f"mean must be 1-dimensional, got shape {mean.shape}")
        d = mean.shape[0]
        if inv_cov.shape != (d, d):
            raise ValueError(
                f"inv_cov must have shape ({d}, {d}), got {inv_cov.shape}"
            )
        scale = np.abs(inv_cov).max()
        if not np.allclose(inv_cov, inv_cov.T, rtol=0, atol=1e-12 * max(scale, 1.0)):
            raise ValueError("inv_cov must be symmetric")
        if self.ridge < 0:
            raise ValueError(f"ridge must be >= 0, got {self.ridge}")
        mean.setflags(write=False)
        inv_cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "inv_cov", inv_cov)

    @property
    def dims(self) -> int:
        return self.mean.shape[0]


def fit_covariance(data: Dataset, ridge: float = 1e-6) -> CovarianceModel:
    """Fit the centroid and inverse covariance of ``data``.

    The covariance is the unbiased sample covariance (divisor N-1) plus a
    ridge term ridge * (trace(cov)/D) * I, so ``ridge`` is dimensionless:
    it adds that fraction of the average per-dimension variance to every
    diagonal entry before inversion.

    Args:
        data: dataset with N >= 2 rows.
        ridge: regularization strength, >= 0. The default 1e-6 keeps wide
            datasets (D > N, rank-deficient covariance) invertible.

    Returns:
        CovarianceModel with the fitted mean and inverse covariance.

    Raises:
        SingularCovarianceError: the regularized covariance is numerically
            singular. With ridge=0 this is certain when D >= N.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    rows = data.rows
    n, d = rows.shape
    mean = rows.mean(axis=0)
    centered = rows - mean
    cov = centered.T @ centered / (n - 1)
    if ridge > 0:
        cov = cov + (ridge * np.trace(cov) / d) * np.eye(d)

    # eigh gives a symmetric inverse and an honest singularity test; a raw
    # np.linalg.inv would silently return garbage near rank deficiency.
    evals, evecs = np.linalg.eigh(cov)
    if evals[-1] <= 0 or evals[0] <= _SINGULAR_RTOL * evals[-1]:
        raise SingularCovarianceError(
            f"covariance is singular (eigenvalue range [{evals[0]:.3e}, "
            f"{evals[-1]:.3e}] with ridge={ridge:g}); set ridge > 0 or "
            f"reduce dimensionality (N={n}, D={d})"
        )
    inv_cov = (evecs / evals) @ evecs.T
    inv_cov = (inv_cov + inv_cov.T) / 2.0
    return CovarianceModel(mean=mean, inv_cov=inv_cov, ridge=float(ridge))


def _whitening_factor(model: CovarianceModel) -> np.ndarray:
    """Matrix W with W @ W.T = inv_cov, so rows @ W has Euclidean geometry."""
    try:
        return np.linalg.cholesky(model.inv_cov)
    except np.linalg.LinAlgError:
        # Rounding can leave a tiny negative eigenvalue; clip and refactor.
        evals, evecs = np.linalg.eigh(model.inv_cov)
        return evecs * np.sqrt(np.clip(evals, 0.0, None))


def _check_dims(model: CovarianceModel, data: Dataset) -> None:
    if data.dims != model.dims:
        raise ValueError(
            f"dimension mismatch: model has D={model.dims}, data has D={data.dims}"
        )


def mahalanobis_to_centroid(
    model: CovarianceModel, data: Dataset, squared: bool = False
) -> np.ndarray:
    """Distance from each row to the model centroid, sqrt(v' inv_cov v).

    Args:
        model: fitted covariance model of matching dimension.
        data: dataset to score.
        squared: return squared distances instead (skips the sqrt).

    Returns:
        Length-N vector of non-negative finite distances.
    """
    _check_dims(model, data)
    w = _whitening_factor(model)
    white = (data.rows - model.mean) @ w
    sq = np.einsum("ij,ij->i", white, white)
    return sq if squared else np.sqrt(sq)


def pairwise_mahalanobis(
    model: CovarianceModel, data: Dataset, squared: bool = False
) -> np.ndarray:
    """All-pairs distances sqrt((x_i - x_j)' inv_cov (x_i - x_j)).

    Computed as Euclidean distances of whitened rows, so the returned matrix
    is exactly symmetric with an exactly zero diagonal, and duplicate rows
    are at distance exactly 0.

    Args:
        model: fitted covariance model of matching dimension.
        data: dataset to score.
        squared: return squared distances instead.

    Returns:
        N x N symmetric matrix with zero diagonal.
    """
    _check_dims(model, data)
    w = _whitening_factor(model)
    white = data.rows @ w
    condensed = pdist(white, metric="sqeuclidean" if squared else "euclidean")
    return squareform(condensed)
