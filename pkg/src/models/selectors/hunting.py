import logging
import numpy as np
from dataclasses import dataclass
from typing import Any
from joblib import Parallel, delayed

from src.exceptions import AllModelsFailed, ConfigError, PosiError, SelectionFailed
from src.models.design_core.design import as_design
from src.models.lm_homoskedastic.train import ols
from src.models.lm_heteroskedastic.train import eicker_sandwich
from src.models.binreg.train import fit_mle
from src.models.binreg.features import model_based_variance, sandwich_bin
from src.models.selectors.results import SelectionResult

FAMILIES = ('lm', 'bin')
VARIANCE_RULES = ('model', 'sandwich')


@dataclass(frozen=True)
class RankedModel:
    position: int
    model: Any
    loglik: float
    criterion: float
    fit: Any


def _gaussian_profile_loglik(fit, n):
    rss = float(fit.residuals @ fit.residuals)
    with np.errstate(divide='ignore'):
        return -0.5 * n * (np.log(2.0 * np.pi * rss / n) + 1.0)


def _fit_one(X, y, M, family):
    """Returns (loglik, fit) or (None, reason) when the model cannot be used."""
    try:
        if family == 'lm':
            fit = ols(X, M, y)
            return _gaussian_profile_loglik(fit, X.n), fit
        fit = fit_mle(y, X, M)
        if not fit.exists:
            return None, "mle-nonexistent"
        if not fit.converged:
            return None, "no-convergence"
        return fit.loglik, fit
    except PosiError as e:
        return None, type(e).__name__


def penalized_loglik_rank(X, y, candidates, lam, family='lm', n_jobs=1, notes=None):
    """
    Candidates ordered by maximized log-likelihood minus lam * |M|, best first;
    ties keep the candidate-set order. Models that cannot be fitted are skipped.
    """
    if family not in FAMILIES:
        raise ConfigError(f"family must be one of {FAMILIES}, got '{family}'")
    X = as_design(X)
    y = np.asarray(y, dtype=float)

    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_fit_one)(X, y, M, family) for M in candidates
    )

    ranked = []
    for position, (M, (loglik, fit)) in enumerate(zip(candidates, results)):
        if loglik is None:
            if notes is not None:
                notes.append(f"skipped {M.label()}: {fit}")
            continue
        ranked.append(RankedModel(position, M, float(loglik), float(loglik - lam * M.size), fit))

    if not ranked:
        raise AllModelsFailed("No candidate model could be fitted")
    ranked.sort(key=lambda r: (-r.criterion, r.position))
    return ranked


def _stderr(X, y, ranked, family, variance_rule):
    if family == 'lm':
        if variance_rule == 'sandwich':
            return np.sqrt(eicker_sandwich(X, ranked.model, y).sigma2_diag)
        return ranked.fit.stderr()
    if variance_rule == 'sandwich':
        return np.sqrt(sandwich_bin(ranked.fit, y, X).sigma2_diag)
    return np.sqrt(model_based_variance(ranked.fit, X).sigma2_diag)


def significance_hunting(X, y, candidates, n_best, lam, family='lm', variance_rule='model', n_jobs=1):
    """
    Among the n_best models by penalized log-likelihood, returns the (model, j)
    with the largest |beta_hat_j| / stderr_j. Ties go to the earlier-ranked model,
    then the smaller position j.
    """
    X = as_design(X)
    y = np.asarray(y, dtype=float)
    if not (1 <= n_best <= len(candidates)):
        raise ConfigError(f"n_best must lie in [1, {len(candidates)}], got {n_best}")
    if variance_rule not in VARIANCE_RULES:
        raise ConfigError(f"variance_rule must be one of {VARIANCE_RULES}, got '{variance_rule}'")

    notes = []
    ranked = penalized_loglik_rank(X, y, candidates, lam, family, n_jobs=n_jobs, notes=notes)
    trace = tuple((r.model.label(), r.criterion) for r in ranked[:n_best])

    best, best_stat = None, -np.inf
    for r in ranked[:n_best]:
        stderr = _stderr(X, y, r, family, variance_rule)
        with np.errstate(divide='ignore', invalid='ignore'):
            stats = np.abs(r.fit.beta_hat) / stderr
        stats = np.where(np.isnan(stats), -np.inf, stats)
        j = int(np.argmax(stats))
        if stats[j] > best_stat:
            best, best_stat = (r.model, j + 1), float(stats[j])

    if best is None:
        raise SelectionFailed("No finite test statistic among the top-ranked models")
    if notes:
        logging.debug(f"Significance hunting skipped {len(notes)} model(s)")
    return SelectionResult(selected=best[0], focus_coef=best[1], trace=trace, notes=tuple(notes))


def max_t(X, y, candidates, family='lm', coef=1, n_jobs=1):
    """Adversarial selector: the candidate whose coefficient on column `coef` has the largest |t|."""
    X = as_design(X)
    y = np.asarray(y, dtype=float)
    pool = [M for M in candidates if coef in M.indices]
    if not pool:
        raise SelectionFailed(f"No candidate contains column {coef}")

    results = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(_fit_one)(X, y, M, family) for M in pool)

    best, best_stat, trace = None, -np.inf, []
    for M, (loglik, fit) in zip(pool, results):
        if loglik is None:
            continue
        pos = M.indices.index(coef)
        ranked = RankedModel(0, M, loglik, loglik, fit)
        with np.errstate(divide='ignore', invalid='ignore'):
            stat = float(abs(fit.beta_hat[pos]) / _stderr(X, y, ranked, family, 'model')[pos])
        if np.isnan(stat):
            continue
        trace.append((M.label(), stat))
        if stat > best_stat:
            best, best_stat = (M, pos + 1), stat

    if best is None:
        raise AllModelsFailed("No candidate containing the focus column could be fitted")
    return SelectionResult(selected=best[0], focus_coef=best[1], trace=tuple(trace))
