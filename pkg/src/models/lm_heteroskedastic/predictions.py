from src.models.confidence import assemble_generic_ci, KIND_BOUND
from src.models.design_core.design import as_design
from src.models.posi_constants.quantiles import b_alpha, check_level
from src.models.lm_heteroskedastic.train import eicker_sandwich


def posi_constant_hlm(candidates, p, alpha):
    """B_alpha(min(k, p), k): the stacked sandwich covariance has rank at most p."""
    return b_alpha(min(candidates.k, p), candidates.k, alpha)


def ci_hlm(X, y, candidates, alpha, selected, constant=None):
    """beta_hat_j +/- sqrt(Eicker variance_j) * B_alpha(min(k, p), k)."""
    X = as_design(X)
    candidates.index_of(selected)
    check_level(alpha)

    fit = eicker_sandwich(X, selected, y)
    constant = constant if constant is not None else posi_constant_hlm(candidates, X.p, alpha)
    return assemble_generic_ci(fit.beta_hat, [0], fit.sigma2_diag, constant, models=[selected],
                               column_names=X.column_names, constant_kind=KIND_BOUND)[0]
