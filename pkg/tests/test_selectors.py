import numpy as np
import pytest
import statsmodels.api as sm
from scipy.special import expit
from sklearn.linear_model import LogisticRegression, lars_path

from src.exceptions import ConfigError, KTooLarge, SelectionFailed
from src.models.binreg.train import fit_mle
from src.models.design_core.candidates import enumerate_subsets
from src.models.design_core.design import CandidateModel, DesignMatrix
from src.models.selectors.hunting import max_t, penalized_loglik_rank, significance_hunting
from src.models.selectors.lar import lar_steps
from src.models.selectors.lasso import lasso_logistic, lasso_logistic_path_point
from src.models.selectors.registry import SelectorSpec, run_selector
from src.models.selectors.results import SelectionResult
from src.models.selectors.stepwise import forward_stepwise


@pytest.fixture
def regression():
    rng = np.random.default_rng(17)
    X = DesignMatrix(rng.standard_normal((50, 6)))
    y = X.values @ np.array([2.0, 0.0, -1.0, 0.0, 0.5, 0.0]) + rng.standard_normal(50)
    return X, y


def _logistic_data(seed, n=80):
    rng = np.random.default_rng(seed)
    xv = rng.standard_normal((n, 5))
    y = (rng.random(n) < expit(xv @ np.array([1.5, 0.0, 0.0, -1.0, 0.0]))).astype(float)
    return xv, y


# --- LAR and stepwise ---
def test_lar_entry_order_matches_sklearn(regression):
    X, y = regression
    _, active, _ = lars_path(X.values, y, method='lar', max_iter=4)
    result = lar_steps(X, y, 4)
    assert list(result.entry_order) == [j + 1 for j in active[:4]]
    assert result.selected.indices == tuple(sorted(result.entry_order))


def test_lar_first_step_and_focus(regression):
    X, y = regression
    result = lar_steps(X, y, 1)
    assert result.selected.indices == (int(np.argmax(np.abs(X.values.T @ y))) + 1,)
    assert result.focus_coef == 1

    third = lar_steps(X, y, 3)
    assert third.selected.indices[third.focus_coef - 1] == third.entry_order[-1]
    assert len(third.trace) == 3


def test_forward_stepwise_matches_greedy_search(regression):
    X, y = regression
    active = []
    for _ in range(3):
        def rss(j):
            cols = sorted(active + [j])
            beta = np.linalg.lstsq(X.values[:, cols], y, rcond=None)[0]
            return np.sum((y - X.values[:, cols] @ beta) ** 2)
        active.append(min((j for j in range(X.p) if j not in active), key=rss))

    result = forward_stepwise(X, y, 3)
    assert list(result.entry_order) == [j + 1 for j in active]
    assert result.selected.indices[result.focus_coef - 1] == active[-1] + 1
    rss_trace = [value for _, value in result.trace]
    assert rss_trace == sorted(rss_trace, reverse=True)


def test_step_counts_validated(regression):
    X, y = regression
    with pytest.raises(KTooLarge):
        lar_steps(X, y, 7)
    with pytest.raises(KTooLarge):
        forward_stepwise(X, y, 0)


# --- Lasso-logistic ---
def test_lasso_logistic_satisfies_kkt():
    xv, y = _logistic_data(3)
    lam = 3.0
    beta, _ = lasso_logistic_path_point(xv, y, lam)
    grad = xv.T @ (y - expit(xv @ beta))
    nonzero = beta != 0.0
    assert np.any(nonzero)
    np.testing.assert_allclose(grad[nonzero], lam * np.sign(beta[nonzero]), atol=1e-3)
    assert np.all(np.abs(grad[~nonzero]) <= lam + 1e-3)

    result = lasso_logistic(xv, y, lam)
    assert result.selected.indices == tuple(int(j) + 1 for j in np.flatnonzero(nonzero))
    assert result.selected.link == 'logit'


def test_lasso_logistic_without_penalty_is_the_mle():
    xv, y = _logistic_data(4)
    beta, _ = lasso_logistic_path_point(xv, y, 0.0)
    fit = fit_mle(y, xv, CandidateModel((1, 2, 3, 4, 5)), 'logit')
    np.testing.assert_allclose(beta, fit.beta_hat, atol=1e-5)


def test_lasso_logistic_matches_sklearn_l1():
    xv, y = _logistic_data(7, n=120)
    lam = 4.0
    beta, _ = lasso_logistic_path_point(xv, y, lam)
    reference = LogisticRegression(penalty='l1', C=1.0 / lam, fit_intercept=False, solver='liblinear',
                                   tol=1e-10, max_iter=10_000).fit(xv, y)
    np.testing.assert_allclose(beta, reference.coef_[0], atol=1e-3)


def test_lasso_logistic_empty_support():
    xv, y = _logistic_data(5)
    with_intercept = np.column_stack([np.ones(len(y)), xv])
    result = lasso_logistic(with_intercept, y, 1e4)
    assert result.selected == CandidateModel((1,), 'logit')
    assert "empty-support-intercept-fallback" in result.notes

    with pytest.raises(SelectionFailed):
        lasso_logistic(xv, y, 1e4)
    with pytest.raises(ConfigError):
        lasso_logistic(xv, y, -1.0)


# --- Significance hunting and max-t ---
def test_hunting_without_penalty_picks_largest_t_in_full_model():
    rng = np.random.default_rng(23)
    X = DesignMatrix(rng.standard_normal((40, 4)))
    y = X.values @ np.array([0.3, 0.0, 1.0, 0.0]) + rng.standard_normal(40)
    result = significance_hunting(X, y, enumerate_subsets(4), n_best=1, lam=0.0)

    reference = sm.OLS(y, X.values).fit()
    assert result.selected.indices == (1, 2, 3, 4)
    assert result.focus_coef == int(np.argmax(np.abs(reference.tvalues))) + 1
    assert len(result.trace) == 1


def test_penalized_rank_order_and_heavy_penalty(regression):
    X, y = regression
    candidates = enumerate_subsets(4, max_size=3)
    ranked = penalized_loglik_rank(X.values[:, :4], y, candidates, lam=2.0)
    criteria = [r.criterion for r in ranked]
    assert criteria == sorted(criteria, reverse=True)
    assert len(ranked) == len(candidates)

    heavy = penalized_loglik_rank(X.values[:, :4], y, candidates, lam=1e6)
    assert all(r.model.size == 1 for r in heavy[:4])


def test_hunting_binary_family_returns_candidate():
    xv, y = _logistic_data(6)
    candidates = enumerate_subsets(5, max_size=2, links=['logit'])
    result = significance_hunting(xv, y, candidates, n_best=3, lam=2.0, family='bin', variance_rule='sandwich')
    assert result.selected in candidates
    assert 1 <= result.focus_coef <= result.selected.size
    assert len(result.trace) == 3


def test_hunting_validates_arguments(regression):
    X, y = regression
    candidates = enumerate_subsets(3)
    with pytest.raises(ConfigError):
        significance_hunting(X.values[:, :3], y, candidates, n_best=0, lam=0.0)
    with pytest.raises(ConfigError):
        significance_hunting(X.values[:, :3], y, candidates, n_best=2, lam=0.0, variance_rule='robust')


def test_max_t_matches_brute_force(regression):
    X, y = regression
    candidates = enumerate_subsets(4)
    xv = X.values[:, :4]
    best, best_t = None, -1.0
    for M in candidates:
        if 1 not in M.indices:
            continue
        reference = sm.OLS(y, xv[:, M.columns]).fit()
        t = abs(reference.tvalues[0])
        if t > best_t:
            best, best_t = M, t

    result = max_t(xv, y, candidates, coef=1)
    assert result.selected == best
    assert result.focus_coef == 1
    with pytest.raises(SelectionFailed):
        max_t(xv, y, enumerate_subsets(2), coef=3)


# --- Registry ---
def test_selector_spec_from_dict_and_label():
    spec = SelectorSpec.from_dict({"kind": "significance_hunting", "n_best": 20, "lambda": 2, "family": "lm"})
    assert spec.lam == 2.0 and spec.n_best == 20
    assert spec.label() == "significance_hunting_n20"
    assert SelectorSpec.from_dict(spec.to_dict()) == spec

    lar = SelectorSpec.from_dict({"kind": "lar_steps", "k": 2})
    assert lar.label() == "lar_steps_k2"
    fixed = SelectorSpec.from_dict({"kind": "fixed", "model": {"indices": [1, 3], "link": "logit"}})
    assert fixed.model == CandidateModel((1, 3), 'logit')


@pytest.mark.parametrize("data", [
    {"k": 1},
    {"kind": "bogus"},
    {"kind": "lar_steps"},
    {"kind": "significance_hunting", "lambda": 1.0},
    {"kind": "fixed"},
    {"kind": "penalized_loglik", "lambda": -1.0},
    {"kind": "max_t", "family": "poisson"},
])
def test_selector_spec_rejects_bad_configs(data):
    with pytest.raises(ConfigError):
        SelectorSpec.from_dict(data)


def test_run_selector_dispatch(regression):
    X, y = regression
    spec = SelectorSpec(kind='lar_steps', k=2)
    assert run_selector(spec, X, y) == lar_steps(X, y, 2)

    fixed = run_selector(SelectorSpec(kind='fixed', model=CandidateModel((2,))), X, y)
    assert fixed.selected == CandidateModel((2,)) and fixed.focus_coef == 1

    with pytest.raises(ConfigError):
        run_selector(SelectorSpec(kind='significance_hunting', n_best=2), X, y)


def test_run_selector_accepts_callables(regression):
    X, y = regression
    result = run_selector(lambda X, y: CandidateModel((1, 2)), X, y)
    assert isinstance(result, SelectionResult)
    assert result.selected == CandidateModel((1, 2)) and result.focus_coef == 1
