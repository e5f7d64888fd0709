import os
import sys
import time
import logging
from joblib import Parallel, delayed

from src.config import REPORT_DIR
from src.models.binreg.predictions import posi_constant_bin
import src.models.sim_harness.scenarios as sc
import src.models.sim_harness.replication as rp
import src.models.sim_harness.predictions as pr


def run_scenario(config, n_jobs=1):
    """
    Runs every replication of a scenario and aggregates the outcomes.
    Each replication draws from its own substream, so `n_jobs` never changes the report.
    """
    start = time.perf_counter()
    candidates = config.candidate_set()

    # Binary constant depends only on (k, n, p)
    b_const = None
    if config.family == 'bin':
        b_const = posi_constant_bin(candidates, config.n, config.p, config.alpha)

    logging.info(f"Scenario {config.scenario_id}: {config.reps} reps, {len(candidates)} candidate models, "
                 f"{len(config.selectors)} selector(s)")
    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(rp.run_replication)(config, rep, candidates, b_const) for rep in range(config.reps)
    )

    report = pr.aggregate(config, results, wall_time=time.perf_counter() - start)
    logging.info(f"Scenario {config.scenario_id} finished in {report.wall_time:.1f}s")
    return report


def run_scenarios(configs, out_path=None, n_jobs=1):
    reports = [run_scenario(config, n_jobs=n_jobs) for config in configs]
    if out_path is not None:
        pr.write_reports(reports, out_path)
    return reports


def run_pipeline(config_path=None, preset=None, out_path=None, n_jobs=1, reps=None):
    """
    Simulation entry point: a scenario JSON file or a named preset, reported to CSV.
    `reps` overrides the replication count of every scenario.
    """
    # 1. Scenarios
    configs = sc.load_scenarios(config_path) if config_path else sc.get_preset(preset)
    if reps is not None:
        configs = [sc.ScenarioConfig.from_dict({**c.to_dict(), 'reps': reps}) for c in configs]

    # 2. Output location
    if out_path is None:
        name = preset or os.path.splitext(os.path.basename(config_path))[0]
        out_path = os.path.join(REPORT_DIR, f"{name}_report.csv")

    print(f">>> [STATUS] Running {len(configs)} scenario(s) with {n_jobs} worker thread(s)...", file=sys.stderr)
    reports = run_scenarios(configs, out_path=out_path, n_jobs=n_jobs)
    print(f">>> [DONE] Report written to {out_path}", file=sys.stderr)
    return reports


if __name__ == "__main__":
    run_pipeline(preset='table2', reps=50)
