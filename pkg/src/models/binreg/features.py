import numpy as np
from dataclasses import dataclass
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.exceptions import SingularHessian
from src.models.design_core.design import as_design
from src.models.design_core.diagnostics import submatrix
from src.models.binreg.links import get_link


@dataclass(frozen=True, eq=False)
class BinSandwich:
    matrix: np.ndarray
    sigma2_diag: np.ndarray


def _inverse_hessian(fit):
    try:
        factor = cho_factor(fit.hessian_hat)
    except LinAlgError:
        raise SingularHessian(f"Hessian of {fit.model.label()} is not positive definite") from None
    return cho_solve(factor, np.eye(fit.hessian_hat.shape[0]))


def working_residuals(fit, y, X):
    """u_i = h_dot / (h (1 - h)) (y_i - h); the weight is identically 1 for the logit link."""
    link = get_link(fit.link)
    gamma = submatrix(X, fit.model) @ fit.beta_hat
    y = np.asarray(y, dtype=float)
    if link.canonical:
        return y - link.h(gamma)
    return link.weight(gamma) * (y - link.h(gamma))


def _sandwich(fit, X, squared_weights):
    xm = submatrix(X, fit.model)
    h_inv = _inverse_hessian(fit)
    a = np.sqrt(squared_weights)[:, None] * (xm @ h_inv)
    matrix = a.T @ a
    return BinSandwich(matrix=matrix, sigma2_diag=np.diag(matrix).copy())


def sandwich_bin(fit, y, X):
    """H^{-1} X[M]' diag(u^2) X[M] H^{-1}."""
    X = as_design(X)
    u = working_residuals(fit, y, X)
    return _sandwich(fit, X, u * u)


def model_based_variance(fit, X):
    """
    The plug-in variance S_bar: the sandwich with u_i^2 replaced by its model
    expectation w_i^2 h_i (1 - h_i), which is h_i (1 - h_i) for the logit link.
    """
    X = as_design(X)
    link = get_link(fit.link)
    gamma = submatrix(X, fit.model) @ fit.beta_hat
    h = link.h(gamma)
    variance = h * (1.0 - h)
    if not link.canonical:
        # Var(u_i) = w_i^2 h_i (1 - h_i); the w_i factor cancels only for the canonical link
        variance = link.weight(gamma) ** 2 * variance
    return _sandwich(fit, X, variance)
