import logging
import numpy as np
from dataclasses import replace

from src.config import DEFAULT_DRAWS, DEFAULT_SEED
from src.exceptions import MissingForcedIndex
from src.models.confidence import assemble_generic_ci, KIND_GAMMA, KIND_XI, KIND_NAIVE
from src.models.design_core.design import CandidateModel, as_design
from src.models.posi_constants.cache import cache_key, cached_constant
from src.models.posi_constants.quantiles import (
    PosiConstant, METHOD_CLOSED_FORM, check_level, k_quantile, normal_constant
)
from src.models.lm_homoskedastic.features import gamma_blocks, xi_matrix
from src.models.lm_homoskedastic.train import ols


def _constant_for(corr, alpha, draws, seed, n_jobs):
    # Rank one without zero-variance coordinates: every |Z_j| equals |Z_1|
    if corr.rank == 1 and not np.any(corr.zero_variance):
        value = normal_constant(alpha).value
        return PosiConstant(value=value, alpha=alpha, method=METHOD_CLOSED_FORM)
    return k_quantile(corr, alpha, draws=draws, seed=seed, n_jobs=n_jobs)


def posi_constant_lm(X, candidates, alpha, draws=DEFAULT_DRAWS, seed=DEFAULT_SEED, individual=False,
                     coef=1, use_cache=True, persist=False, n_jobs=1):
    """
    K_{1-alpha}(corr(Gamma_n)), or K_{1-alpha}(corr(Xi_n)) with `individual`.
    Cached by a content hash of (design, candidates, alpha, draws, seed).
    """
    check_level(alpha)
    X = as_design(X)

    def compute():
        if individual:
            corr = xi_matrix(X, candidates, coef=coef)
        else:
            corr = gamma_blocks(X, candidates).corr
        return _constant_for(corr, alpha, draws, seed, n_jobs)

    if not use_cache:
        return compute()
    kind = f"xi{coef}" if individual else "gamma"
    key = cache_key('lm', kind, X.values, candidates.to_dict(), float(alpha), int(draws), seed)
    return cached_constant(key, compute, persist=persist)


def _check_constant(constant, alpha):
    if constant.alpha != alpha:
        logging.warning(f"Constant was computed at alpha={constant.alpha} but intervals use alpha={alpha}")


def ci_lm(X, y, candidates, alpha, selected, k_const=None, sigma2=None, **constant_kwargs):
    """
    Simultaneous POSI intervals for the selected model:
    beta_hat_j +/- sqrt(sigma2_hat [(X'X)^{-1}]_jj) * K_{1-alpha}(corr(Gamma_n)).
    A known `sigma2` replaces sigma2_hat.
    """
    X = as_design(X)
    candidates.index_of(selected)
    check_level(alpha)

    fit = ols(X, selected, y)
    s2 = fit.sigma2_hat if sigma2 is None else float(sigma2)
    variances = s2 * np.diag(fit.gram_inverse)

    constant = k_const if k_const is not None else posi_constant_lm(X, candidates, alpha, **constant_kwargs)
    _check_constant(constant, alpha)
    return assemble_generic_ci(fit.beta_hat, [0], variances, constant, models=[selected],
                               column_names=X.column_names, constant_kind=KIND_GAMMA)[0]


def ci_individual(X, y, candidates, alpha, selected, coef=1, k_const=None, sigma2=None, **constant_kwargs):
    """Interval for coefficient `coef` alone, calibrated by K_{1-alpha}(corr(Xi_n))."""
    X = as_design(X)
    candidates.index_of(selected)
    check_level(alpha)
    missing = [M.label() for M in candidates if coef not in M.indices]
    if missing:
        raise MissingForcedIndex(f"Models {missing[:5]} do not contain coefficient {coef}")

    constant = k_const
    if constant is None:
        constant = posi_constant_lm(X, candidates, alpha, individual=True, coef=coef, **constant_kwargs)
    _check_constant(constant, alpha)

    fit = ols(X, selected, y)
    s2 = fit.sigma2_hat if sigma2 is None else float(sigma2)
    pos = selected.indices.index(coef)
    variance = s2 * fit.gram_inverse[pos, pos]

    out = assemble_generic_ci([fit.beta_hat[pos]], [0], [variance], constant,
                              models=[CandidateModel((coef,), selected.link)],
                              column_names=X.column_names, constant_kind=KIND_XI)[0]
    # Report the position inside the selected model
    interval = replace(out.intervals[0], coef=pos + 1)
    return replace(out, model=selected, intervals=(interval,))


def ci_lm_naive(X, y, alpha, selected, sigma2=None):
    """Classical per-model interval with Phi^{-1}(1 - alpha/2), ignoring selection."""
    X = as_design(X)
    fit = ols(X, selected, y)
    s2 = fit.sigma2_hat if sigma2 is None else float(sigma2)
    variances = s2 * np.diag(fit.gram_inverse)
    return assemble_generic_ci(fit.beta_hat, [0], variances, normal_constant(alpha), models=[selected],
                               column_names=X.column_names, constant_kind=KIND_NAIVE)[0]
