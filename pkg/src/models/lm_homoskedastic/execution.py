import logging

from src.config import DEFAULT_DRAWS, DEFAULT_SEED
from src.data.clean import load_problem
from src.data.decoder import parse_selected
from src.models.lm_homoskedastic.predictions import ci_lm, ci_individual, ci_lm_naive


def run_lm_ci(design_path, response_path, candidates_path, alpha, selected, individual=False, coef=1,
              naive=False, sigma2=None, draws=DEFAULT_DRAWS, seed=DEFAULT_SEED, n_jobs=1, persist=False):
    """
    `posi lm ci`: simultaneous intervals for the selected model, the single
    coefficient `coef` with `individual`, or the unadjusted intervals with `naive`.
    """
    X, y, candidates = load_problem(design_path, response_path, candidates_path)
    model = parse_selected(selected)
    logging.info(f"lm ci: n={X.n}, p={X.p}, {len(candidates)} candidate models, selected {model.label()}")

    if naive:
        candidates.index_of(model)
        return ci_lm_naive(X, y, alpha, model, sigma2=sigma2)
    options = dict(draws=draws, seed=seed, n_jobs=n_jobs, persist=persist)
    if individual:
        return ci_individual(X, y, candidates, alpha, model, coef=coef, sigma2=sigma2, **options)
    return ci_lm(X, y, candidates, alpha, model, sigma2=sigma2, **options)
