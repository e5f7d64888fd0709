import numpy as np
from dataclasses import dataclass
from scipy.linalg import qr, solve_triangular

from src.config import RANK_RTOL
from src.exceptions import RankDeficient


def numerical_rank(matrix):
    """Rank of an n x m matrix: eigenvalues of X'X above n * lambda_max * 1e-12."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    eig = singular ** 2
    return int(np.sum(eig > matrix.shape[0] * eig[0] * RANK_RTOL)) if eig[0] > 0 else 0


@dataclass(frozen=True, eq=False)
class LeastSquaresFactor:
    """Pivoted QR of a full-column-rank matrix: X[:, perm] = Q R."""
    q: np.ndarray
    r: np.ndarray
    perm: np.ndarray

    @classmethod
    def from_matrix(cls, xm):
        xm = np.atleast_2d(np.asarray(xm, dtype=float))
        n, m = xm.shape
        if n < m or numerical_rank(xm) < m:
            raise RankDeficient(f"Submatrix of shape {xm.shape} does not have full column rank")
        q, r, perm = qr(xm, mode='economic', pivoting=True)
        return cls(q=q, r=r, perm=perm)

    @property
    def size(self):
        return self.r.shape[0]

    def solve(self, y):
        """Least-squares coefficients for y (vector or n x c matrix)."""
        coef_perm = solve_triangular(self.r, self.q.T @ y)
        coef = np.empty_like(coef_perm)
        coef[self.perm] = coef_perm
        return coef

    def coefficient_map(self):
        """(X'X)^{-1} X' as an m x n matrix."""
        rows = solve_triangular(self.r, self.q.T)
        out = np.empty_like(rows)
        out[self.perm] = rows
        return out

    def gram_inverse(self):
        """(X'X)^{-1} from R^{-1} R^{-T}, unpermuted."""
        r_inv = solve_triangular(self.r, np.eye(self.size))
        inner = r_inv @ r_inv.T
        out = np.empty_like(inner)
        out[np.ix_(self.perm, self.perm)] = inner
        return out

    def hat_diagonal(self):
        return np.einsum('ij,ij->i', self.q, self.q)

    def fitted(self, y):
        return self.q @ (self.q.T @ y)
