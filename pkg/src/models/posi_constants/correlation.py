import numpy as np
import joblib
from dataclasses import dataclass, field
from typing import Optional

from src.config import RANK_RTOL, SYMMETRY_TOL, PSD_RTOL, UNIT_DIAGONAL_TOL
from src.exceptions import NonPsd, InvalidCorrelation


def _check_symmetric_psd(matrix):
    """Returns (eigenvalues, eigenvectors) of a symmetric PSD matrix or raises NonPsd."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NonPsd(f"Expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonPsd("Matrix contains non-finite entries")

    scale = max(1.0, float(np.max(np.abs(matrix))))
    if np.max(np.abs(matrix - matrix.T)) > SYMMETRY_TOL * scale:
        raise NonPsd("Matrix is not symmetric")

    eigvals, eigvecs = np.linalg.eigh((matrix + matrix.T) / 2)
    largest = max(float(eigvals[-1]), 0.0)
    if eigvals[0] < -PSD_RTOL * max(largest, 1e-300):
        raise NonPsd(f"Smallest eigenvalue {eigvals[0]:.3e} is below the PSD tolerance")
    return eigvals, eigvecs


def _count_rank(eigvals, k):
    largest = max(float(np.max(eigvals)), 0.0)
    return int(np.sum(eigvals > k * largest * RANK_RTOL))


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """
    k x k correlation matrix held through a factor `root` with Gamma = root @ root.T.

    Coordinates with zero variance in the source covariance keep a zero row in
    `root` (zero diagonal entry) and are flagged in `zero_variance`.
    """
    root: np.ndarray
    rank: int
    zero_variance: np.ndarray
    _entries: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def k(self):
        return self.root.shape[0]

    @property
    def entries(self):
        if self._entries is not None:
            return self._entries
        return self.root @ self.root.T

    def content_hash(self):
        return joblib.hash(self.root)

    @classmethod
    def from_matrix(cls, entries):
        """Validates a correlation matrix and stores its symmetric PSD square root."""
        entries = np.atleast_2d(np.asarray(entries, dtype=float))
        eigvals, eigvecs = _check_symmetric_psd(entries)

        diag = np.diag(entries)
        zero_variance = np.abs(diag) <= UNIT_DIAGONAL_TOL
        if not np.all(zero_variance | (np.abs(diag - 1.0) <= UNIT_DIAGONAL_TOL)):
            raise InvalidCorrelation("Diagonal entries must equal 1 (or 0 for zero-variance coordinates)")

        k = entries.shape[0]
        clipped = np.clip(eigvals, 0.0, None)
        root = (eigvecs * np.sqrt(clipped)) @ eigvecs.T
        root[zero_variance, :] = 0.0

        symmetric = (entries + entries.T) / 2
        return cls(root=root, rank=_count_rank(eigvals, k),
                   zero_variance=zero_variance, _entries=symmetric)

    @classmethod
    def from_covariance(cls, sigma):
        """corr(Sigma) = diag(Sigma)^+1/2 Sigma diag(Sigma)^+1/2 with the Moore-Penrose convention."""
        sigma = np.atleast_2d(np.asarray(sigma, dtype=float))
        _check_symmetric_psd(sigma)

        diag = np.diag(sigma).copy()
        zero_variance = diag <= RANK_RTOL * max(float(np.max(diag)), 0.0)
        inv_sd = np.zeros_like(diag)
        inv_sd[~zero_variance] = 1.0 / np.sqrt(diag[~zero_variance])

        corr = sigma * np.outer(inv_sd, inv_sd)
        corr = (corr + corr.T) / 2
        np.fill_diagonal(corr, np.where(zero_variance, 0.0, 1.0))
        return cls.from_matrix(corr)

    @classmethod
    def from_factor(cls, factor):
        """
        Builds corr(F F') without forming the k x k matrix.
        Rows of the factor are scaled to unit norm; zero rows are zero-variance coordinates.
        """
        factor = np.atleast_2d(np.asarray(factor, dtype=float))
        norms = np.linalg.norm(factor, axis=1)
        zero_variance = norms <= np.sqrt(RANK_RTOL) * max(float(np.max(norms)), 0.0)

        root = np.zeros_like(factor)
        root[~zero_variance] = factor[~zero_variance] / norms[~zero_variance, None]

        k = root.shape[0]
        singular = np.linalg.svd(root, compute_uv=False)
        return cls(root=root, rank=_count_rank(singular ** 2, k), zero_variance=zero_variance)
