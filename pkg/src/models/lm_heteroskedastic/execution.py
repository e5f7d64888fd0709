from src.data.clean import load_problem
from src.data.decoder import parse_selected
from src.models.lm_heteroskedastic.predictions import ci_hlm


def run_hetlm_ci(design_path, response_path, candidates_path, alpha, selected):
    """`posi hetlm ci`: Eicker-sandwich intervals with the bound constant."""
    X, y, candidates = load_problem(design_path, response_path, candidates_path)
    return ci_hlm(X, y, candidates, alpha, parse_selected(selected))
