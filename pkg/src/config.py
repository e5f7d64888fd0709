import os
import logging

# Path Configuration
script_dir = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.abspath(os.path.join(script_dir, ".."))
JSON_DIR = os.path.join(PROJECT_ROOT, "json_files")
CONSTANTS_CACHE_PATH = os.path.join(JSON_DIR, "constants", "constants_cache.json")
REPORT_DIR = os.path.join(PROJECT_ROOT, "reports")

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

# Monte-Carlo quantile of the max-norm
DEFAULT_DRAWS = 200_000
MIN_DRAWS = 1000
DEFAULT_SEED = 20_190_611
MC_CHUNK_SIZE = 20_000
MC_BLOCK_ELEMENTS = 4_000_000

# Universal bound B_alpha(q, N)
B_ALPHA_TOL = 1e-4
B_ALPHA_NODES = 512
BISECTION_MAX_ITER = 200
BETA_CF_MAX_ITER = 2000
BETA_CF_EPS = 1e-14

# Linear algebra
RANK_RTOL = 1e-12
SYMMETRY_TOL = 1e-10
PSD_RTOL = 1e-8
UNIT_DIAGONAL_TOL = 1e-8

# Candidate enumeration
MAX_ENUMERATION_P = 24
MAX_ENUMERATED_MODELS = 2 ** 20

# Binary regression
LINKS = ('logit', 'probit', 'cloglog', 'loglog')
DEFAULT_LINK = 'logit'
MLE_TOL = 1e-8
MLE_MAX_ITER = 100
MAX_STEP_HALVINGS = 50
SEPARATION_ETA = 30.0
SEPARATION_BETA_NORM = 1e6
DEFAULT_TAU = 0.01

# Selectors
LASSO_TOL = 1e-7
LASSO_MAX_ITER = 1000
LASSO_MIN_WEIGHT = 1e-5

# Simulation harness
DEFAULT_REPS = 500
DEFAULT_ALPHA = 0.1
HARNESS_DRAWS = 10_000
REPORT_COLUMNS = [
    'scenario_id', 'procedure', 'coverage', 'median_len', 'q90_len',
    'simultaneous', 'nonexistent', 'reps', 'seed'
]


def setup_logging(level=logging.INFO):
    """Configures the root logger the same way for every entry point."""
    logging.basicConfig(level=level, format=LOG_FORMAT)
