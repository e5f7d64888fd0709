import json
import logging
import numpy as np
import pandas as pd
import pytest

import src.models.sim_harness.replication as rp
from src.config import REPORT_COLUMNS
from src.exceptions import ConfigError, DimensionMismatch, SelectionFailed
from src.models.confidence import assemble_generic_ci
from src.models.design_core.candidates import enumerate_subsets
from src.models.design_core.design import CandidateModel, DesignMatrix
from src.models.lm_homoskedastic.predictions import ci_lm
from src.models.lm_homoskedastic.train import ols
from src.models.posi_constants.quantiles import PosiConstant, METHOD_MONTE_CARLO
from src.models.selectors.registry import SelectorSpec
from src.models.sim_harness.data_gathering import draw_design_values, gen_errors, gen_response, gen_design
from src.models.sim_harness.execution import run_pipeline, run_scenario
from src.models.sim_harness.predictions import lower_nearest_rank, sidecar_path, write_reports
from src.models.sim_harness.scenarios import ScenarioConfig, get_preset, load_scenarios, resolve_beta


def _lm_config(**overrides):
    params = dict(
        scenario_id='lm_small', n=30, p=3, family='lm', reps=4, draws=1000, seed=11, naive=True,
        selectors=(SelectorSpec('forward_stepwise', k=1),), beta=[1.0, 0.0, 0.5],
    )
    params.update(overrides)
    return ScenarioConfig(**params)


# --- Data generation ---
@pytest.mark.parametrize("design", ['independent', 'correlated'])
def test_generated_columns_have_unit_norm(design):
    values = draw_design_values(design, 40, 6, np.random.default_rng(0))
    np.testing.assert_allclose(np.linalg.norm(values, axis=0), 1.0, atol=1e-12)


def test_gaussian_rows_equicorrelated():
    values = draw_design_values('gaussian_rows', 20_000, 3, np.random.default_rng(1), rho=0.8)
    corr = np.corrcoef(values, rowvar=False)
    np.testing.assert_allclose(corr[np.triu_indices(3, 1)], 0.8, atol=0.02)
    with pytest.raises(ConfigError):
        draw_design_values('block', 10, 2, np.random.default_rng(1))


@pytest.mark.parametrize("dist", ['N', 'L', 'U', 'SN'])
def test_errors_are_standardized(dist):
    e = gen_errors(dist, 200_000, np.random.default_rng(2))
    assert np.mean(e) == pytest.approx(0.0, abs=0.02)
    assert np.var(e) == pytest.approx(1.0, rel=0.02)


def test_unknown_error_distribution():
    with pytest.raises(ConfigError):
        gen_errors('cauchy', 10, np.random.default_rng(0))


def test_misspecified_binary_response_uses_wider_truth():
    config = get_preset('table3')[-1]
    assert config.p_true == 21
    rng = np.random.default_rng(3)
    X_full = gen_design(config, rng, width=config.p_true)
    y, prob = gen_response(config, X_full, rng)
    assert X_full.p == 21
    assert set(np.unique(y)) <= {0.0, 1.0}
    assert np.all((prob > 0) & (prob < 1))


# --- Generic interval assembly ---
def test_assemble_generic_ci_zero_constant_gives_points():
    theta = np.array([1.0, -2.0, 0.5])
    sets = assemble_generic_ci(theta, [0, 1], [1.0, 4.0, 9.0], 0.0)
    assert [s.model.size for s in sets] == [1, 2]
    for s, start in zip(sets, (0, 1)):
        for j, iv in enumerate(s.intervals):
            assert iv.lower == iv.upper == theta[start + j]


def test_assemble_generic_ci_single_interval_width():
    constant = PosiConstant(value=1.6449, alpha=0.1, method=METHOD_MONTE_CARLO)
    conf = assemble_generic_ci([0.0], [0], [1.0], constant)[0]
    assert conf.intervals[0].upper - conf.intervals[0].lower == pytest.approx(3.2898)
    assert conf.level == pytest.approx(0.9)


def test_assemble_generic_ci_shape_errors():
    with pytest.raises(DimensionMismatch):
        assemble_generic_ci([1.0, 2.0], [0], [1.0], 1.0)
    with pytest.raises(DimensionMismatch):
        assemble_generic_ci([1.0, 2.0], [1], [1.0, 1.0], 1.0)
    with pytest.raises(DimensionMismatch):
        assemble_generic_ci([1.0, 2.0], [0], [1.0, -1.0], 1.0)


def test_assemble_generic_ci_reproduces_ci_lm():
    rng = np.random.default_rng(4)
    X = DesignMatrix(rng.standard_normal((25, 3)))
    y = rng.standard_normal(25)
    M = CandidateModel((1, 3))
    constant = PosiConstant(value=2.1, alpha=0.1, method=METHOD_MONTE_CARLO)
    expected = ci_lm(X, y, enumerate_subsets(3), 0.1, M, k_const=constant)

    fit = ols(X, M, y)
    generic = assemble_generic_ci(fit.beta_hat, [0], fit.sigma2_hat * np.diag(fit.gram_inverse), constant,
                                  models=[M], column_names=X.column_names)[0]
    assert generic.intervals == expected.intervals


# --- Report statistics ---
def test_lower_nearest_rank():
    assert lower_nearest_rank([3.0, 1.0, 2.0], 0.5) == 2.0
    assert lower_nearest_rank([3.0, 1.0, 2.0], 0.9) == 3.0
    assert lower_nearest_rank(np.arange(1.0, 11.0), 0.9) == 9.0
    assert lower_nearest_rank(np.arange(1.0, 11.0), 0.5) == 5.0
    assert np.isnan(lower_nearest_rank([], 0.5))


def test_replication_streams_keyed_by_rep():
    a_rng, a_seed = rp.replication_streams(5, 3)
    b_rng, b_seed = rp.replication_streams(5, 3)
    assert a_seed == b_seed
    assert a_rng.random() == b_rng.random()
    c_rng, _ = rp.replication_streams(5, 4)
    assert c_rng.random() != rp.replication_streams(5, 3)[0].random()


# --- Scenarios ---
def test_scenario_report_accounting():
    report = run_scenario(_lm_config())
    frame = report.to_frame()
    assert list(frame.columns) == REPORT_COLUMNS
    assert frame['procedure'].tolist() == ['forward_stepwise_k1_posi', 'forward_stepwise_k1_naive']
    assert (frame['reps'] == 4).all()
    for s in report.summaries:
        assert s.covered + s.missed + s.skipped == 4
        assert len(s.lengths) == s.used

    posi, naive = report.summaries
    assert lower_nearest_rank(posi.lengths, 0.5) > lower_nearest_rank(naive.lengths, 0.5)


def test_single_replication_report():
    frame = run_scenario(_lm_config(reps=1, naive=False)).to_frame()
    assert len(frame) == 1
    assert frame.loc[0, 'coverage'] in (0.0, 1.0)
    assert frame.loc[0, 'median_len'] == frame.loc[0, 'q90_len']


def test_scenario_reproducible_across_thread_counts():
    config = _lm_config(reps=6)
    serial = run_scenario(config, n_jobs=1).to_frame()
    threaded = run_scenario(config, n_jobs=3).to_frame()
    pd.testing.assert_frame_equal(serial, threaded)


def test_binary_scenario_runs():
    config = ScenarioConfig(
        scenario_id='bin_small', n=60, p=2, family='bin', reps=3, seed=2, naive=True,
        selectors=(SelectorSpec('fixed', model=CandidateModel((1, 2))),), design='gaussian_rows', beta=[0.5, -0.5],
    )
    report = run_scenario(config)
    assert [s.procedure for s in report.summaries] == ['fixed_posi', 'fixed_naive']
    for s in report.summaries:
        assert s.covered + s.missed + s.skipped == 3


def test_failed_selection_counts_as_nonexistent(monkeypatch, caplog):
    def fail(*args, **kwargs):
        raise SelectionFailed("nothing selected")

    monkeypatch.setattr(rp, 'run_selector', fail)
    with caplog.at_level(logging.ERROR):
        report = run_scenario(_lm_config(reps=3))

    frame = report.to_frame()
    assert (frame['nonexistent'] == 3).all()
    assert frame['coverage'].isna().all()
    assert report.details()['procedures'][0]['skip_reasons'] == {'SelectionFailed': 3}
    assert "skipped" in caplog.text


def test_write_reports_csv_and_sidecar(tmp_path):
    config = _lm_config(reps=2)
    first, second = tmp_path / "out" / "a.csv", tmp_path / "out" / "b.csv"
    write_reports([run_scenario(config)], str(first))
    write_reports([run_scenario(config)], str(second))

    assert first.read_bytes() == second.read_bytes()
    assert list(pd.read_csv(first).columns) == REPORT_COLUMNS
    sidecar = json.loads((tmp_path / "out" / "a.json").read_text())
    assert sidecar['scenarios'][0]['config']['scenario_id'] == 'lm_small'
    assert sidecar_path("reports/x_report.csv") == "reports/x_report.json"


def test_run_pipeline_from_config_file(tmp_path):
    path = tmp_path / "scenarios.json"
    path.write_text(json.dumps({"scenarios": [_lm_config().to_dict()]}))
    out = tmp_path / "report.csv"
    reports = run_pipeline(config_path=str(path), out_path=str(out), reps=2)
    assert reports[0].config.reps == 2
    assert out.exists() and (tmp_path / "report.json").exists()


# --- Config handling ---
def test_resolve_beta_presets():
    np.testing.assert_allclose(resolve_beta('scaled', 100, 3), [-0.1, 0.1, -0.1])
    np.testing.assert_allclose(resolve_beta('dense', 10, 5), [-1.5, 1.5, 0.0, -1.5, 1.5])
    np.testing.assert_allclose(resolve_beta('sparse', 10, 3), [1.0, 0.0, 0.0])
    with pytest.raises(ConfigError):
        resolve_beta('huge', 10, 3)
    with pytest.raises(ConfigError):
        resolve_beta([1.0, 2.0], 10, 3)


def test_presets_shape():
    assert len(get_preset('table1')) == 8
    assert len(get_preset('table2')) == 4
    table3 = get_preset('table3')
    assert len(table3) == 12 and all(c.family == 'bin' and c.naive for c in table3)
    assert len(get_preset('table4')) == 8
    with pytest.raises(ConfigError):
        get_preset('table9')


def test_load_scenarios_round_trip(tmp_path):
    config = get_preset('table2')[1]
    path = tmp_path / "one.json"
    path.write_text(json.dumps(config.to_dict()))
    loaded, = load_scenarios(str(path))
    assert loaded.to_dict() == config.to_dict()
    np.testing.assert_array_equal(loaded.beta_vector, config.beta_vector)

    with pytest.raises(ConfigError):
        load_scenarios(str(tmp_path / "missing.json"))


@pytest.mark.parametrize("overrides", [
    {'reps': 0},
    {'design': 'block'},
    {'error_dist': 'cauchy'},
    {'selectors': ()},
    {'selectors': (SelectorSpec('lar_steps', k=1), SelectorSpec('lar_steps', k=1))},
    {'misspec': {'p_bar': 5}},
    {'alpha': 1.5},
    {'beta': [1.0]},
])
def test_invalid_scenarios_rejected(overrides):
    with pytest.raises(ConfigError):
        _lm_config(**overrides)


def test_from_dict_rejects_unknown_fields():
    data = _lm_config().to_dict()
    data['colour'] = 'blue'
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(data)
    data.pop('colour')
    data.pop('selectors')
    with pytest.raises(ConfigError):
        ScenarioConfig.from_dict(data)


# --- Acceptance runs ---
@pytest.mark.slow
def test_fixed_selector_known_variance_calibration():
    config = _lm_config(reps=400, known_sigma=True, selectors=(SelectorSpec('fixed', model=CandidateModel((1, 2))),))
    posi, naive = run_scenario(config, n_jobs=4).summaries
    assert naive.coverage() == pytest.approx(0.9, abs=0.05)
    assert posi.coverage() >= naive.coverage()


@pytest.mark.slow
def test_significance_hunting_posi_holds_where_naive_would_not():
    config = ScenarioConfig.from_dict({**get_preset('table2')[0].to_dict(), 'reps': 200, 'naive': True})
    posi, naive = run_scenario(config, n_jobs=4).summaries
    assert posi.coverage() >= 0.85
    assert posi.coverage() > naive.coverage()


def _preset_scenario(preset, scenario_id, **overrides):
    config = next(c for c in get_preset(preset) if c.scenario_id == scenario_id)
    return ScenarioConfig.from_dict({**config.to_dict(), **overrides})


def _pairs(report):
    summaries = report.summaries
    return list(zip(summaries[0::2], summaries[1::2]))


@pytest.mark.slow
def test_lar_posi_coverage_on_table1_design():
    config = _preset_scenario('table1', 'table1_correlated_N', reps=100, naive=True)
    report = run_scenario(config, n_jobs=4)
    for posi, naive in _pairs(report):
        assert posi.procedure.endswith('_posi') and naive.procedure.endswith('_naive')
        assert posi.coverage() >= 1 - config.alpha - 0.07
        assert np.median(posi.lengths) > np.median(naive.lengths)


@pytest.mark.slow
@pytest.mark.parametrize("scenario_id", ['table3_sparse_small_n100', 'table3_dense_small_n100'])
def test_lasso_logistic_posi_coverage(scenario_id):
    config = _preset_scenario('table3', scenario_id, reps=100)
    posi, naive = run_scenario(config, n_jobs=4).summaries
    assert posi.used >= 60
    assert posi.coverage() >= 1 - config.alpha - 0.07
    assert posi.coverage() >= naive.coverage()
    assert np.median(posi.lengths) > np.median(naive.lengths)


@pytest.mark.slow
def test_binary_significance_hunting_posi_coverage():
    config = _preset_scenario('table4', 'table4_nbest5_zero_n100', reps=100)
    posi, naive = run_scenario(config, n_jobs=4).summaries
    assert posi.coverage() >= 1 - config.alpha - 0.07
    assert posi.coverage() >= naive.coverage()


@pytest.mark.slow
def test_max_t_search_breaks_naive_but_not_posi():
    config = _lm_config(scenario_id='max_t_stress', n=50, p=6, reps=300, draws=5000, beta='zero',
                        design='gaussian_rows', rho=0.8,
                        selectors=(SelectorSpec('max_t', family='lm', coef=1),))
    posi, naive = run_scenario(config, n_jobs=4).summaries
    assert posi.coverage() >= 1 - config.alpha - 0.05
    assert naive.coverage() < 1 - config.alpha
    assert posi.coverage() > naive.coverage()
