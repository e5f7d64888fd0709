import logging
import numpy as np
from dataclasses import dataclass
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.config import (
    DEFAULT_LINK, DEFAULT_TAU, MLE_TOL, MLE_MAX_ITER, MAX_STEP_HALVINGS,
    SEPARATION_ETA, SEPARATION_BETA_NORM
)
from src.exceptions import NonBinaryResponse, NoConvergence, ProbOutOfRange, RankDeficient
from src.models.design_core.design import CandidateModel, as_design
from src.models.design_core.diagnostics import submatrix
from src.models.design_core.linalg import numerical_rank
from src.models.binreg.links import get_link


@dataclass(frozen=True, eq=False)
class BinFit:
    model: CandidateModel
    beta_hat: np.ndarray
    converged: bool
    exists: bool
    loglik: float
    hessian_hat: np.ndarray
    iterations: int
    score_norm: float

    @property
    def link(self):
        return self.model.link


def check_binary(y):
    y = np.asarray(y, dtype=float)
    if not np.all((y == 0.0) | (y == 1.0)):
        raise NonBinaryResponse("Response must contain only 0 and 1")
    return y


def resolve_link(M, link=None):
    """Link from the argument, then the model, then the package default."""
    return get_link(link or M.link or DEFAULT_LINK)


def _loglik(xm, y, link, beta):
    gamma = xm @ beta
    first = np.where(y > 0, y * link.phi1(gamma), 0.0)
    second = np.where(y < 1, (1.0 - y) * link.phi2(gamma), 0.0)
    return float(np.sum(first + second))


def _score(xm, y, link, beta):
    gamma = xm @ beta
    c = y * link.phi1_d(gamma) + (1.0 - y) * link.phi2_d(gamma)
    return xm.T @ c


def _hessian(xm, y, link, beta):
    gamma = xm @ beta
    d = -y * link.phi1_dd(gamma) - (1.0 - y) * link.phi2_dd(gamma)
    return (xm * d[:, None]).T @ xm


def loglik(y, X, M, link, beta):
    """sum_i y_i phi1(gamma_i) + (1 - y_i) phi2(gamma_i) with gamma = X[M] beta."""
    y = check_binary(y)
    return _loglik(submatrix(X, M), y, get_link(link), np.asarray(beta, dtype=float))


def score(y, X, M, link, beta):
    y = check_binary(y)
    return _score(submatrix(X, M), y, get_link(link), np.asarray(beta, dtype=float))


def hessian(y, X, M, link, beta):
    """X[M]' D X[M] with D_ii = -y_i phi1'' - (1 - y_i) phi2'' (positive definite: the negative Hessian of l)."""
    y = check_binary(y)
    return _hessian(submatrix(X, M), y, get_link(link), np.asarray(beta, dtype=float))


def _newton(xm, y, link, tol, max_iter, detect_separation):
    """Damped Newton ascent on the strictly concave l from beta = 0."""
    beta = np.zeros(xm.shape[1])
    ll = _loglik(xm, y, link, beta)
    threshold = tol * (1.0 + np.linalg.norm(xm, 2))
    converged, exists, iterations = False, True, 0

    for iterations in range(max_iter + 1):
        grad = _score(xm, y, link, beta)
        if np.linalg.norm(grad) <= threshold:
            converged = True
            break
        if detect_separation and (np.max(np.abs(xm @ beta)) > SEPARATION_ETA
                                  or np.linalg.norm(beta) > SEPARATION_BETA_NORM):
            exists = False
            break
        if iterations == max_iter:
            break

        # 1. Newton direction
        try:
            direction = cho_solve(cho_factor(_hessian(xm, y, link, beta)), grad)
        except LinAlgError:
            # Saturated probabilities leave D numerically zero
            if detect_separation:
                exists = False
            break

        # 2. Step halving until l does not decrease
        step = 1.0
        for _ in range(MAX_STEP_HALVINGS):
            candidate = beta + step * direction
            ll_candidate = _loglik(xm, y, link, candidate)
            if np.isfinite(ll_candidate) and ll_candidate >= ll:
                break
            step /= 2.0
        else:
            logging.warning("Step halving exhausted; stopping Newton iterations")
            break
        beta, ll = candidate, ll_candidate

    hess = _hessian(xm, y, link, beta)
    return beta, ll, hess, converged, exists, iterations, float(np.linalg.norm(_score(xm, y, link, beta)))


def _full_rank_submatrix(X, M):
    xm = submatrix(X, M)
    if numerical_rank(xm) < M.size:
        raise RankDeficient(f"X[M] for model {M.label()} does not have full column rank")
    return xm


def fit_mle(y, X, M, link=None, tol=MLE_TOL, max_iter=MLE_MAX_ITER):
    """
    Quasi-MLE by damped Newton. Diverging linear predictors (|X beta| > 30 before
    convergence) or ||beta|| > 1e6 flag the MLE as nonexistent instead of raising.
    """
    X = as_design(X)
    y = check_binary(y)
    link = resolve_link(M, link)
    xm = _full_rank_submatrix(X, M)

    beta, ll, hess, converged, exists, iterations, grad_norm = _newton(
        xm, y, link, tol, max_iter, detect_separation=True
    )
    if not exists:
        logging.info(f"MLE for {M.label()} ({link.id}) does not exist: separation detected after {iterations} iterations")
    return BinFit(model=M.with_link(link.id), beta_hat=beta, converged=converged, exists=exists,
                  loglik=ll, hessian_hat=hess, iterations=iterations, score_norm=grad_norm)


def pseudo_target(p_vec, X, M, link=None, tau=DEFAULT_TAU, tol=MLE_TOL, max_iter=MLE_MAX_ITER):
    """Maximizer of the expected log-likelihood sum_i p_i phi1(gamma_i) + (1 - p_i) phi2(gamma_i)."""
    X = as_design(X)
    p_vec = np.asarray(p_vec, dtype=float)
    if tau > 0:
        if np.any(p_vec < tau) or np.any(p_vec > 1.0 - tau):
            raise ProbOutOfRange(f"Success probabilities must lie in [{tau}, {1 - tau}]")
    elif np.any(p_vec <= 0.0) or np.any(p_vec >= 1.0):
        raise ProbOutOfRange("Success probabilities must lie strictly inside (0, 1)")

    link = resolve_link(M, link)
    xm = _full_rank_submatrix(X, M)
    beta, _, _, converged, _, iterations, grad_norm = _newton(
        xm, p_vec, link, tol, max_iter, detect_separation=False
    )
    if not converged:
        raise NoConvergence(f"Pseudo-target Newton stopped after {iterations} iterations (|score|={grad_norm:.2e})")
    return beta
