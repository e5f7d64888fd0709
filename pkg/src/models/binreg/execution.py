import logging

from src.data.clean import load_problem
from src.data.decoder import parse_selected
from src.models.binreg.predictions import ci_bin, naive_ci_bin, resolve_selected


def run_bin_ci(design_path, response_path, candidates_path, alpha, selected, naive=False):
    """`posi bin ci`: sandwich POSI intervals, or model-based naive intervals with `naive`."""
    X, y, candidates = load_problem(design_path, response_path, candidates_path, binary=True)
    model = resolve_selected(candidates, parse_selected(selected))
    logging.info(f"bin ci: n={X.n}, p={X.p}, k={candidates.k}, selected {model.label()}")

    if naive:
        return naive_ci_bin(X, y, alpha, model)
    return ci_bin(X, y, candidates, alpha, model)
