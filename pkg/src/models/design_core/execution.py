from src.data.clean import load_design
from src.data.decoder import load_candidates
from src.models.design_core.candidates import enumerate_subsets
from src.models.design_core.diagnostics import condition_x2_report


def run_design_report(design_path, candidates_path=None):
    """`posi design report`: rank, n * max leverage and eigenvalue ratio of a design."""
    X = load_design(design_path)
    candidates = load_candidates(candidates_path, p=X.p) if candidates_path else enumerate_subsets(X.p)
    report = condition_x2_report(X, candidates).to_dict()
    report['models'] = len(candidates)
    report['k'] = candidates.k
    return report
