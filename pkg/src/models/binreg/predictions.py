import logging

from src.config import DEFAULT_LINK
from src.exceptions import ConfigError, MleNonexistent, NoConvergence
from src.models.confidence import assemble_generic_ci, KIND_BOUND, KIND_NAIVE
from src.models.design_core.design import as_design
from src.models.posi_constants.quantiles import b_alpha, check_level, normal_constant
from src.models.binreg.train import fit_mle
from src.models.binreg.features import sandwich_bin, model_based_variance


def posi_constant_bin(candidates, n, p, alpha):
    """B_alpha(min(k, n), k), reduced to B_alpha(min(k, p), k) when every candidate uses the logit link."""
    k = candidates.k
    # Models without a link are fitted with the default one
    links = {link or DEFAULT_LINK for link in candidates.links}
    rank = min(k, p) if links == {'logit'} else min(k, n)
    return b_alpha(rank, k, alpha)


def resolve_selected(candidates, selected):
    """Attaches the link of a single-link candidate set to a selected model given without one."""
    if selected.link is None:
        links = candidates.links
        if len(links) != 1:
            raise ConfigError("Selected model must name its link when the candidate set mixes links")
        selected = selected.with_link(next(iter(links)))
    candidates.index_of(selected)
    return selected


def _usable_fit(X, y, selected, fit):
    fit = fit if fit is not None else fit_mle(y, X, selected)
    if not fit.exists:
        raise MleNonexistent(f"MLE for {selected.label()} does not exist in this sample")
    if not fit.converged:
        raise NoConvergence(f"MLE for {selected.label()} did not converge after {fit.iterations} iterations")
    return fit


def ci_bin(X, y, candidates, alpha, selected, constant=None, fit=None):
    """Sandwich-based POSI intervals beta_hat_j +/- sqrt(S_jj) * B."""
    X = as_design(X)
    check_level(alpha)
    selected = resolve_selected(candidates, selected)
    fit = _usable_fit(X, y, selected, fit)

    sandwich = sandwich_bin(fit, y, X)
    constant = constant if constant is not None else posi_constant_bin(candidates, X.n, X.p, alpha)
    logging.debug(f"Binary POSI constant for k={candidates.k}: {constant.value:.4f}")
    return assemble_generic_ci(fit.beta_hat, [0], sandwich.sigma2_diag, constant, models=[fit.model],
                               column_names=X.column_names, constant_kind=KIND_BOUND)[0]


def naive_ci_bin(X, y, alpha, selected, fit=None):
    """Phi^{-1}(1 - alpha/2) with the model-based variance, ignoring selection."""
    X = as_design(X)
    fit = _usable_fit(X, y, selected, fit)
    variance = model_based_variance(fit, X)
    return assemble_generic_ci(fit.beta_hat, [0], variance.sigma2_diag, normal_constant(alpha),
                               models=[fit.model], column_names=X.column_names, constant_kind=KIND_NAIVE)[0]
