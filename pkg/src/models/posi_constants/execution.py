from src.config import DEFAULT_DRAWS, DEFAULT_SEED
from src.data.clean import load_correlation
from src.models.posi_constants.correlation import CorrelationMatrix
from src.models.posi_constants.quantiles import k_quantile, b_alpha, upper_bound_k


def run_k_quantile(corr_path, alpha, draws=DEFAULT_DRAWS, seed=DEFAULT_SEED, n_jobs=1, bound=False):
    """`posi constant k-quantile`: Monte-Carlo K, or the simulation-free bound with `bound`."""
    corr = CorrelationMatrix.from_matrix(load_correlation(corr_path))
    if bound:
        return upper_bound_k(corr, alpha)
    return k_quantile(corr, alpha, draws=draws, seed=seed, n_jobs=n_jobs)


def run_b_alpha(q, big_n, alpha):
    return b_alpha(q, big_n, alpha)
