"""Thin SVD of the feature matrix with deterministic sign canonicalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


class PcaError(ValueError):
    """Raised when a factorization cannot be computed or validated."""


@dataclass(frozen=True)
class PcaModel:
    """Orthonormal left singular vectors, non-increasing singular values, and
    the centering mean (zero when fitted uncentered)."""

    U: np.ndarray          # d x d, orthonormal columns
    sigma: np.ndarray      # d, non-increasing, >= 0
    mean: np.ndarray       # d
    n_points: int

    def __post_init__(self):
        U = np.asarray(self.U, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        mean = np.asarray(self.mean, dtype=float)
        d = U.shape[0]
        if U.shape != (d, d) or sigma.shape != (d,) or mean.shape != (d,):
            raise PcaError("inconsistent model shapes")
        if np.max(np.abs(U.T @ U - np.eye(d))) >= 1e-10:
            raise PcaError("U columns are not orthonormal")
        if np.any(sigma < 0) or np.any(np.diff(sigma) > 0):
            raise PcaError("singular values must be non-negative and non-increasing")
        for a in (U, sigma, mean):
            a.setflags(write=False)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "mean", mean)

    @property
    def dim(self) -> int:
        return self.U.shape[0]


def canonicalize_signs(U: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's largest-magnitude entry is positive.

    Ties take the lowest index. Idempotent and deterministic.
    """
    U = np.array(U, dtype=float)
    for i in range(U.shape[1]):
        j = int(np.argmax(np.abs(U[:, i])))
        if U[j, i] < 0:
            U[:, i] = -U[:, i]
    return U


def fit(ds: Dataset, center: bool = True) -> PcaModel:
    """Fit the SVD of the (optionally centered) feature matrix.

    Parameters
    ----------
    ds : Dataset
        Feature matrix, points as columns.
    center : bool
        Subtract the per-feature mean before factorizing (default on).

    Returns
    -------
    PcaModel with U (d x d), sigma (length d, zero-padded when n < d), mean.
    """
    X = ds.features
    d, n = X.shape
    if d < 1 or n < 1:
        raise PcaError("need at least one feature and one point")
    if not np.all(np.isfinite(X)):
        raise PcaError("matrix contains non-finite entries")
    mean = X.mean(axis=1) if center else np.zeros(d)
    Xc = X - mean[:, None]
    try:
        U, s, _ = np.linalg.svd(Xc, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise PcaError(f"SVD failed to converge: {exc}") from exc
    if not np.all(np.isfinite(s)):
        raise PcaError("singular values are non-finite")
    sigma = np.zeros(d)
    sigma[: s.shape[0]] = s
    return PcaModel(canonicalize_signs(U), sigma, mean, n)


def scores(model: PcaModel, x: np.ndarray) -> np.ndarray:
    """Coefficients of x in the singular-vector basis: Uᵀ(x − mean)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.dim,):
        raise PcaError(f"expected a vector of length {model.dim}, got shape {x.shape}")
    return model.U.T @ (x - model.mean)


def scores_matrix(model: PcaModel, X: np.ndarray) -> np.ndarray:
    """Scores for every column of a d x n matrix at once."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != model.dim:
        raise PcaError(f"expected a {model.dim} x n matrix, got shape {X.shape}")
    return model.U.T @ (X - model.mean[:, None])


def degeneracy_warnings(model: PcaModel, rel_gap_tol: float = 1e-8) -> list:
    """Warn about near-equal adjacent singular values and a near-zero tail.

    A clustered or vanishing spectrum means the optimal plot is not unique;
    the pipeline still returns the canonical choice.
    """
    s = model.sigma
    top = s[0]
    if top == 0.0:
        return ["all singular values are zero; every isometry is optimal"]
    out = []
    for k in range(len(s) - 1):
        if (s[k] - s[k + 1]) / top < rel_gap_tol:
            out.append(
                f"singular values {k + 1} and {k + 2} are nearly equal "
                f"(relative gap {(s[k] - s[k + 1]) / top:.3e}); optimal plot not unique"
            )
    if s[-1] / top < rel_gap_tol:
        out.append(
            f"smallest singular value is near zero (sigma_d/sigma_1 = {s[-1] / top:.3e}); "
            "optimal plot not unique"
        )
    return out
