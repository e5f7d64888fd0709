import numpy as np
from dataclasses import dataclass

from src.exceptions import DegenerateDof
from src.models.design_core.design import CandidateModel, as_design
from src.models.design_core.diagnostics import submatrix
from src.models.design_core.linalg import LeastSquaresFactor


@dataclass(frozen=True, eq=False)
class LmFit:
    model: CandidateModel
    beta_hat: np.ndarray
    sigma2_hat: float
    residuals: np.ndarray
    gram_inverse: np.ndarray

    @property
    def dof(self):
        return self.residuals.shape[0] - self.model.size

    def stderr(self, sigma2=None):
        s2 = self.sigma2_hat if sigma2 is None else sigma2
        return np.sqrt(s2 * np.diag(self.gram_inverse))


def _factor(X, M):
    return LeastSquaresFactor.from_matrix(submatrix(X, M))


def ols(X, M, y):
    """OLS fit of y on X[M] with sigma2_hat = RSS / (n - |M|)."""
    X = as_design(X)
    y = np.asarray(y, dtype=float)
    if X.n <= M.size:
        raise DegenerateDof(f"n={X.n} leaves no residual degrees of freedom for |M|={M.size}")

    factor = _factor(X, M)
    beta_hat = factor.solve(y)
    residuals = y - submatrix(X, M) @ beta_hat
    sigma2_hat = float(residuals @ residuals) / (X.n - M.size)

    return LmFit(model=M, beta_hat=beta_hat, sigma2_hat=sigma2_hat,
                 residuals=residuals, gram_inverse=factor.gram_inverse())


def target_lm(X, M, mu):
    """Projection target (X[M]'X[M])^{-1} X[M]' mu."""
    return _factor(as_design(X), M).solve(np.asarray(mu, dtype=float))


def sigma2_bias(X, M, mu, sigma2):
    """Mean of sigma2_hat under misspecification: sigma2 + ||(I - P)mu||^2 / (n - |M|)."""
    X = as_design(X)
    if X.n <= M.size:
        raise DegenerateDof(f"n={X.n} leaves no residual degrees of freedom for |M|={M.size}")
    mu = np.asarray(mu, dtype=float)
    resid = mu - _factor(X, M).fitted(mu)
    return float(sigma2 * (1.0 + (resid @ resid) / sigma2 / (X.n - M.size)))
