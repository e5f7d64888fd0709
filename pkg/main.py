import sys
import logging
import argparse

from src.config import DEFAULT_ALPHA, DEFAULT_DRAWS, DEFAULT_SEED, setup_logging
from src.data.encoder import write_json
from src.exceptions import ConfigError, PosiError

# Command handlers
from src.models.posi_constants.execution import run_k_quantile, run_b_alpha
from src.models.design_core.execution import run_design_report
from src.models.lm_homoskedastic.execution import run_lm_ci
from src.models.lm_heteroskedastic.execution import run_hetlm_ci
from src.models.binreg.execution import run_bin_ci
from src.models.sim_harness.execution import run_pipeline
from src.models.sim_harness.scenarios import PRESETS, get_preset

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _add_problem_args(parser):
    parser.add_argument('--design', required=True, help="Design CSV with a header row")
    parser.add_argument('--response', required=True, help="Single-column response CSV")
    parser.add_argument('--candidates', help="Candidate-set JSON (default: all non-empty subsets)")
    parser.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)
    parser.add_argument('--selected', required=True, help='Selected model, e.g. "1,3" or \'{"indices":[1,3]}\'')


def build_parser():
    parser = argparse.ArgumentParser(prog='posi', description="Post-selection inference intervals and coverage simulations")
    parser.add_argument('--log-level', default='INFO')
    commands = parser.add_subparsers(dest='command', required=True)

    # --- posi constant ---
    constant = commands.add_parser('constant', help="POSI constants").add_subparsers(dest='action', required=True)
    kq = constant.add_parser('k-quantile')
    kq.add_argument('--corr', required=True, help="Headerless k x k correlation CSV")
    kq.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)
    kq.add_argument('--draws', type=int, default=DEFAULT_DRAWS)
    kq.add_argument('--seed', type=int, default=DEFAULT_SEED)
    kq.add_argument('--threads', type=int, default=1)
    kq.add_argument('--bound', action='store_true', help="Simulation-free upper bound instead of Monte Carlo")
    ba = constant.add_parser('b-alpha')
    ba.add_argument('--q', type=int, required=True)
    ba.add_argument('--big-n', type=int, required=True)
    ba.add_argument('--alpha', type=float, default=DEFAULT_ALPHA)

    # --- posi design ---
    design = commands.add_parser('design').add_subparsers(dest='action', required=True)
    report = design.add_parser('report')
    report.add_argument('--design', required=True)
    report.add_argument('--candidates')

    # --- posi lm / hetlm / bin ---
    lm_ci = commands.add_parser('lm').add_subparsers(dest='action', required=True).add_parser('ci')
    _add_problem_args(lm_ci)
    lm_ci.add_argument('--individual', action='store_true')
    lm_ci.add_argument('--coef', type=int, default=1)
    lm_ci.add_argument('--naive', action='store_true')
    lm_ci.add_argument('--sigma2', type=float, help="Known error variance")
    lm_ci.add_argument('--draws', type=int, default=DEFAULT_DRAWS)
    lm_ci.add_argument('--seed', type=int, default=DEFAULT_SEED)
    lm_ci.add_argument('--threads', type=int, default=1)
    lm_ci.add_argument('--persist', action='store_true', help="Store the constant in the JSON cache")

    hetlm_ci = commands.add_parser('hetlm').add_subparsers(dest='action', required=True).add_parser('ci')
    _add_problem_args(hetlm_ci)

    bin_ci = commands.add_parser('bin').add_subparsers(dest='action', required=True).add_parser('ci')
    _add_problem_args(bin_ci)
    bin_ci.add_argument('--naive', action='store_true')

    # --- posi simulate / presets ---
    simulate = commands.add_parser('simulate')
    source = simulate.add_mutually_exclusive_group(required=True)
    source.add_argument('--config', help="Scenario JSON")
    source.add_argument('--preset', choices=sorted(PRESETS))
    simulate.add_argument('--out', help="Report CSV (a .json sidecar is written next to it)")
    simulate.add_argument('--threads', type=int, default=1)
    simulate.add_argument('--reps', type=int, help="Override the replication count")

    presets = commands.add_parser('presets').add_subparsers(dest='action', required=True)
    presets.add_parser('list')
    show = presets.add_parser('show')
    show.add_argument('name')

    return parser


def dispatch(args):
    """Runs the selected command and returns its JSON payload (None when nothing is printed)."""
    if args.command == 'constant':
        if args.action == 'k-quantile':
            return run_k_quantile(args.corr, args.alpha, args.draws, args.seed, args.threads, args.bound)
        return run_b_alpha(args.q, args.big_n, args.alpha)

    if args.command == 'design':
        return run_design_report(args.design, args.candidates)

    if args.command == 'lm':
        return run_lm_ci(args.design, args.response, args.candidates, args.alpha, args.selected,
                         individual=args.individual, coef=args.coef, naive=args.naive, sigma2=args.sigma2,
                         draws=args.draws, seed=args.seed, n_jobs=args.threads, persist=args.persist)

    if args.command == 'hetlm':
        return run_hetlm_ci(args.design, args.response, args.candidates, args.alpha, args.selected)

    if args.command == 'bin':
        return run_bin_ci(args.design, args.response, args.candidates, args.alpha, args.selected, naive=args.naive)

    if args.command == 'simulate':
        run_pipeline(config_path=args.config, preset=args.preset, out_path=args.out,
                     n_jobs=args.threads, reps=args.reps)
        return None

    if args.action == 'list':
        return {name: [c.scenario_id for c in get_preset(name)] for name in sorted(PRESETS)}
    return {'scenarios': [c.to_dict() for c in get_preset(args.name)]}


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(getattr(logging, str(args.log_level).upper(), logging.INFO))

    try:
        payload = dispatch(args)
    except ConfigError as e:
        logging.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except PosiError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE

    if payload is not None:
        write_json(payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
