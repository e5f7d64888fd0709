import numpy as np
from scipy.stats import skewnorm

from src.exceptions import ConfigError
from src.models.design_core.design import DesignMatrix
from src.models.binreg.links import get_link

ERROR_ALIASES = {'N': 'normal', 'L': 'laplace', 'U': 'uniform', 'SN': 'skew_normal'}
SKEW_SHAPE = 5.0
CORRELATED_DECAY = 0.1


def _unit_columns(values):
    return values / np.linalg.norm(values, axis=0)


def _independent_columns(n, p, rng):
    """Each column is normal, Bernoulli(1/2) or skew-normal(0, 1, 5) with probability 1/3 each."""
    values = np.empty((n, p))
    for j in range(p):
        while True:
            kind = rng.integers(3)
            if kind == 0:
                column = rng.standard_normal(n)
            elif kind == 1:
                column = rng.integers(0, 2, size=n).astype(float)
            else:
                column = skewnorm.rvs(SKEW_SHAPE, size=n, random_state=rng)
            if np.linalg.norm(column) > 0:
                break
        values[:, j] = column
    return _unit_columns(values)


def _gaussian_rows(n, cov, rng):
    chol = np.linalg.cholesky(cov)
    return rng.standard_normal((n, cov.shape[0])) @ chol.T


def draw_design_values(design, n, p, rng, rho=0.0):
    """n x p regressor values for one of the design recipes."""
    if design == 'independent':
        return _independent_columns(n, p, rng)
    if design == 'correlated':
        idx = np.arange(p)
        cov = np.exp(-CORRELATED_DECAY * np.abs(idx[:, None] - idx[None, :]))
        return _unit_columns(_gaussian_rows(n, cov, rng))
    if design == 'gaussian_rows':
        cov = np.full((p, p), rho) + (1.0 - rho) * np.eye(p)
        return _gaussian_rows(n, cov, rng)
    raise ConfigError(f"Unknown design '{design}'")


def gen_design(config, rng, width=None):
    """DesignMatrix for a scenario; `width` > p draws the extra columns of a misspecified truth."""
    values = draw_design_values(config.design, config.n, width or config.p, rng, config.rho)
    return DesignMatrix(values)


def gen_errors(dist, n, rng, shape=SKEW_SHAPE):
    """Errors with mean 0 and variance 1."""
    dist = ERROR_ALIASES.get(dist, dist)
    if dist == 'normal':
        return rng.standard_normal(n)
    if dist == 'laplace':
        return rng.laplace(0.0, 1.0 / np.sqrt(2.0), size=n)
    if dist == 'uniform':
        return rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), size=n)
    if dist == 'skew_normal':
        delta = shape / np.sqrt(1.0 + shape ** 2)
        omega = 1.0 / np.sqrt(1.0 - 2.0 * delta ** 2 / np.pi)
        shift = omega * delta * np.sqrt(2.0 / np.pi)
        return skewnorm.rvs(shape, loc=-shift, scale=omega, size=n, random_state=rng)
    raise ConfigError(f"Unknown error distribution '{dist}'")


def gen_response(config, X_full, rng):
    """
    Returns (y, truth): for lm, truth is the mean vector X beta; for bin, the vector
    of success probabilities h(gamma) with gamma from the (possibly wider) true design.
    """
    if config.family == 'lm':
        mu = X_full.values[:, :config.p] @ config.beta_vector
        return mu + config.sigma * gen_errors(config.error_dist, config.n, rng, config.error_shape), mu

    coef = config.beta_bar_vector if config.misspec else config.beta_vector
    gamma = X_full.values[:, :coef.shape[0]] @ coef
    link = get_link(config.true_link)
    prob = link.h(gamma)
    y = (rng.random(config.n) < prob).astype(float)
    return y, prob
