import logging
import numpy as np
from scipy.special import expit

from src.config import LASSO_TOL, LASSO_MAX_ITER, LASSO_MIN_WEIGHT
from src.exceptions import ConfigError, NoConvergence, SelectionFailed
from src.models.design_core.design import CandidateModel, as_design
from src.models.binreg.train import check_binary
from src.models.selectors.results import SelectionResult


def soft_threshold(z, gamma):
    return np.sign(z) * np.maximum(np.abs(z) - gamma, 0.0)


def lasso_logistic_path_point(xv, y, lam, tol=LASSO_TOL, max_iter=LASSO_MAX_ITER):
    """
    Maximizes l(beta) - lam ||beta||_1 for the logit link (all coefficients penalized).
    IRLS outer loop, cyclic coordinate descent with soft-thresholding inside.
    """
    n, p = xv.shape
    beta = np.zeros(p)

    for outer in range(max_iter):
        # 1. Quadratic approximation at the current beta
        eta = xv @ beta
        prob = expit(eta)
        w = np.maximum(prob * (1.0 - prob), LASSO_MIN_WEIGHT)
        z = eta + (y - prob) / w
        col_scale = (w[:, None] * xv * xv).sum(axis=0)

        # 2. Coordinate descent on 1/2 sum w (z - X beta)^2 + lam ||beta||_1
        beta_old = beta.copy()
        resid = z - eta
        for _ in range(max_iter):
            max_change = 0.0
            for j in range(p):
                if col_scale[j] == 0.0:
                    continue
                xj = xv[:, j]
                rho = np.sum(w * xj * resid) + col_scale[j] * beta[j]
                new = soft_threshold(rho, lam) / col_scale[j]
                change = new - beta[j]
                if change != 0.0:
                    resid -= xj * change
                    beta[j] = new
                    max_change = max(max_change, abs(change))
            if max_change <= tol:
                break

        if np.max(np.abs(beta - beta_old)) <= tol:
            return beta, outer + 1

    raise NoConvergence(f"Lasso-logistic IRLS did not converge in {max_iter} outer iterations")


def _intercept_column(xv):
    constant = np.flatnonzero((np.ptp(xv, axis=0) == 0.0) & (xv[0] != 0.0))
    return int(constant[0]) if constant.size else None


def lasso_logistic(X, y, lam):
    """
    Selects the support of the L1-penalized logistic fit. An empty support maps to
    the intercept-only model when the design has a constant column.
    """
    X = as_design(X)
    y = check_binary(y)
    if lam < 0:
        raise ConfigError(f"lambda must be nonnegative, got {lam}")

    try:
        beta, iterations = lasso_logistic_path_point(X.values, y, lam)
    except NoConvergence as e:
        raise SelectionFailed(str(e)) from e
    support = tuple(int(j) + 1 for j in np.flatnonzero(beta != 0.0))
    notes = [f"irls_iterations={iterations}"]

    if not support:
        intercept = _intercept_column(X.values)
        if intercept is None:
            raise SelectionFailed(f"Lasso support is empty at lambda={lam} and the design has no intercept column")
        logging.info(f"Empty lasso support at lambda={lam}; falling back to the intercept column {intercept + 1}")
        support = (intercept + 1,)
        notes.append("empty-support-intercept-fallback")

    selected = CandidateModel(support, 'logit')
    return SelectionResult(selected=selected, focus_coef=1,
                           trace=((selected.label(), float(np.sum(np.abs(beta)))),), notes=tuple(notes))
