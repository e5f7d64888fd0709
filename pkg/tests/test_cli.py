import json
import numpy as np
import pandas as pd
import pytest
from scipy.stats import norm

from main import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, main
from src.models.selectors.registry import SelectorSpec
from src.models.sim_harness.scenarios import ScenarioConfig


@pytest.fixture
def files(tmp_path):
    rng = np.random.default_rng(0)
    xv = rng.standard_normal((40, 2))
    pd.DataFrame(xv, columns=['dose', 'age']).to_csv(tmp_path / "X.csv", index=False)
    y = xv @ np.array([1.0, 0.5]) + rng.standard_normal(40)
    pd.DataFrame({'y': y}).to_csv(tmp_path / "y.csv", index=False)
    yb = (rng.random(40) < 1.0 / (1.0 + np.exp(-xv[:, 0]))).astype(int)
    pd.DataFrame({'y': yb}).to_csv(tmp_path / "yb.csv", index=False)
    np.savetxt(tmp_path / "corr.csv", np.eye(2), delimiter=",")
    return tmp_path


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_b_alpha_command(capsys):
    code, payload = _run(['constant', 'b-alpha', '--q', '1', '--big-n', '10', '--alpha', '0.1'], capsys)
    assert code == EXIT_OK
    assert payload['value'] == pytest.approx(norm.ppf(0.95))
    assert payload['alpha'] == 0.1


def test_k_quantile_command(files, capsys):
    corr = str(files / "corr.csv")
    code, payload = _run(['constant', 'k-quantile', '--corr', corr, '--draws', '5000', '--seed', '3'], capsys)
    assert code == EXIT_OK
    assert payload['draws'] == 5000 and payload['seed'] == 3
    assert 1.7 < payload['value'] < 2.2

    code, bound = _run(['constant', 'k-quantile', '--corr', corr, '--bound'], capsys)
    assert code == EXIT_OK
    assert bound['value'] >= payload['value'] - 0.05


def test_exit_codes_for_failures(files, capsys):
    # Missing input file is a configuration problem
    code, _ = _run(['constant', 'k-quantile', '--corr', str(files / "missing.csv")], capsys)
    assert code == EXIT_CONFIG

    code, _ = _run(['constant', 'b-alpha', '--q', '2', '--big-n', '10', '--alpha', '1.5'], capsys)
    assert code == EXIT_FAILURE

    code, _ = _run(['lm', 'ci', '--design', str(files / "X.csv"), '--response', str(files / "y.csv"),
                    '--selected', '1,3'], capsys)
    assert code == EXIT_FAILURE

    code, _ = _run(['presets', 'show', 'table9'], capsys)
    assert code == EXIT_CONFIG

    with pytest.raises(SystemExit):
        main(['simulate'])


def test_design_report_command(files, capsys):
    code, payload = _run(['design', 'report', '--design', str(files / "X.csv")], capsys)
    assert code == EXIT_OK
    assert payload['rank'] == 2
    assert payload['models'] == 3 and payload['k'] == 4


def test_lm_ci_commands(files, capsys):
    base = ['lm', 'ci', '--design', str(files / "X.csv"), '--response', str(files / "y.csv"),
            '--selected', '1,2', '--draws', '5000']
    code, posi = _run(base, capsys)
    assert code == EXIT_OK
    assert [iv['name'] for iv in posi['intervals']] == ['dose', 'age']
    assert posi['constant_kind'] == 'posi-gamma'

    code, naive = _run(base + ['--naive'], capsys)
    assert code == EXIT_OK
    assert naive['intervals'][0]['constant'] == pytest.approx(norm.ppf(0.95))
    assert posi['intervals'][0]['constant'] > naive['intervals'][0]['constant']

    code, _ = _run(base + ['--individual', '--coef', '2'], capsys)
    assert code == EXIT_FAILURE


def test_hetlm_and_bin_commands(files, capsys):
    design = str(files / "X.csv")
    code, het = _run(['hetlm', 'ci', '--design', design, '--response', str(files / "y.csv"), '--selected', '1'], capsys)
    assert code == EXIT_OK
    assert het['constant_kind'] == 'bound' and len(het['intervals']) == 1

    code, binary = _run(['bin', 'ci', '--design', design, '--response', str(files / "yb.csv"), '--selected', '1,2'], capsys)
    assert code == EXIT_OK
    assert binary['model'] == {'indices': [1, 2], 'link': 'logit'}

    code, _ = _run(['bin', 'ci', '--design', design, '--response', str(files / "y.csv"), '--selected', '1'], capsys)
    assert code == EXIT_CONFIG


def test_presets_and_simulate_commands(tmp_path, capsys):
    code, listing = _run(['presets', 'list'], capsys)
    assert code == EXIT_OK
    assert sorted(listing) == ['table1', 'table2', 'table3', 'table4']

    config = ScenarioConfig(scenario_id='cli_small', n=25, p=2, reps=3, draws=1000,
                            selectors=(SelectorSpec('forward_stepwise', k=1),), beta=[1.0, 0.0])
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(config.to_dict()))
    out = tmp_path / "reports" / "cli.csv"
    code, payload = _run(['simulate', '--config', str(path), '--out', str(out), '--reps', '2'], capsys)
    assert code == EXIT_OK and payload is None
    frame = pd.read_csv(out)
    assert frame['reps'].tolist() == [2]
