import logging
import numpy as np
from functools import lru_cache
from scipy.special import betaln
from scipy.stats import chi2, norm

from src.config import (
    B_ALPHA_TOL, B_ALPHA_NODES, BISECTION_MAX_ITER, BETA_CF_MAX_ITER, BETA_CF_EPS
)
from src.exceptions import DomainError, NoConvergence

FPMIN = 1e-300


def _beta_continued_fraction(a, b, x):
    """Modified Lentz evaluation of the incomplete-beta continued fraction, vectorized over x."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < FPMIN, FPMIN, d)
    d = 1.0 / d
    h = d.copy()

    for m in range(1, BETA_CF_MAX_ITER + 1):
        m2 = 2 * m
        # Even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < FPMIN, FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < FPMIN, FPMIN, c)
        d = 1.0 / d
        h *= d * c
        # Odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < FPMIN, FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < FPMIN, FPMIN, c)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < BETA_CF_EPS):
            return h

    raise NoConvergence(f"Incomplete beta continued fraction did not converge for a={a}, b={b}")


def regularized_incomplete_beta(a, b, x):
    """
    I_x(a, b) for a, b > 0 and x in [0, 1]. Accepts scalar or array x.
    Uses the continued fraction directly below (a+1)/(a+b+2) and the symmetry
    I_x(a, b) = 1 - I_{1-x}(b, a) above it.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"Shape parameters must be positive, got a={a}, b={b}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x_arr)) or np.any((x_arr < 0) | (x_arr > 1)):
        raise DomainError("x must lie in [0, 1]")

    flat = np.atleast_1d(x_arr).ravel()
    result = np.zeros_like(flat)
    result[flat == 1.0] = 1.0

    inner = (flat > 0.0) & (flat < 1.0)
    if np.any(inner):
        xi = flat[inner]
        with np.errstate(divide='ignore'):
            log_front = a * np.log(xi) + b * np.log1p(-xi) - betaln(a, b)
        front = np.exp(log_front)

        direct = xi < (a + 1.0) / (a + b + 2.0)
        values = np.empty_like(xi)
        if np.any(direct):
            cf = _beta_continued_fraction(a, b, xi[direct])
            values[direct] = front[direct] * cf / a
        if np.any(~direct):
            cf = _beta_continued_fraction(b, a, 1.0 - xi[~direct])
            values[~direct] = 1.0 - front[~direct] * cf / b
        result[inner] = np.clip(values, 0.0, 1.0)

    if x_arr.ndim == 0:
        return float(result[0])
    return result.reshape(x_arr.shape)


@lru_cache(maxsize=32)
def _chi2_nodes(q, nodes):
    """Gauss-Legendre nodes on (0, 1) mapped through the chi-square(q) quantile."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    u = (x + 1.0) / 2.0
    return chi2.ppf(u, q), w / 2.0


def exceedance_bound(t, q, big_n, nodes=B_ALPHA_NODES):
    """C(t) = E_G[min(1, N (1 - F_Beta(1/2,(q-1)/2)(t^2 / G^2)))] with G^2 ~ chi2_q."""
    if q == 1:
        return float(2.0 * norm.sf(t))
    g2, weights = _chi2_nodes(q, nodes)
    ratio = np.clip(t * t / g2, 0.0, 1.0)
    tail = 1.0 - regularized_incomplete_beta(0.5, (q - 1) / 2.0, ratio)
    return float(np.sum(weights * np.minimum(1.0, big_n * tail)))


@lru_cache(maxsize=1024)
def b_alpha_value(q, big_n, alpha, tol=B_ALPHA_TOL, nodes=B_ALPHA_NODES):
    """Smallest t (to within tol) with C(t) <= alpha, found by bracketing then bisection."""
    if q == 1:
        return float(norm.ppf(1.0 - alpha / 2.0))

    # 1. Bracket the root from above
    upper = 1.0
    for _ in range(BISECTION_MAX_ITER):
        if exceedance_bound(upper, q, big_n, nodes) <= alpha:
            break
        upper *= 2.0
    else:
        raise NoConvergence(f"Could not bracket B_alpha for q={q}, N={big_n}")

    # 2. Bisection: C is nonincreasing in t
    lower = 0.0
    for _ in range(BISECTION_MAX_ITER):
        if upper - lower <= tol:
            logging.debug(f"B_alpha(q={q}, N={big_n}, alpha={alpha}) = {upper:.6f}")
            return upper
        mid = (lower + upper) / 2.0
        if exceedance_bound(mid, q, big_n, nodes) <= alpha:
            upper = mid
        else:
            lower = mid
    raise NoConvergence(f"Bisection for B_alpha did not reach tol={tol} in {BISECTION_MAX_ITER} steps")
