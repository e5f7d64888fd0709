import numpy as np

from src.exceptions import KTooLarge, RankDeficient
from src.models.design_core.design import CandidateModel, as_design
from src.models.design_core.linalg import LeastSquaresFactor
from src.models.selectors.results import SelectionResult

TIE_RTOL = 1e-12


def _rss(xv, columns, y):
    factor = LeastSquaresFactor.from_matrix(xv[:, columns])
    resid = y - factor.fitted(y)
    return float(resid @ resid)


def forward_stepwise(X, y, k):
    """Greedy forward selection of k columns by residual sum of squares; ties go to the smaller index."""
    X = as_design(X)
    y = np.asarray(y, dtype=float)
    if k < 1 or k > X.p:
        raise KTooLarge(f"Cannot add {k} variables with p={X.p}")

    active, trace = [], []
    for _ in range(k):
        best_j, best_rss = None, np.inf
        for j in range(X.p):
            if j in active:
                continue
            try:
                rss = _rss(X.values, sorted(active + [j]), y)
            except RankDeficient:
                continue
            if best_j is None or rss < best_rss - TIE_RTOL * max(best_rss, 1.0):
                best_j, best_rss = j, rss
        if best_j is None:
            raise RankDeficient(f"No column can be added to {sorted(j + 1 for j in active)} at full rank")
        active.append(best_j)
        trace.append((CandidateModel(tuple(sorted(j + 1 for j in active))).label(), best_rss))

    selected = CandidateModel(tuple(sorted(j + 1 for j in active)))
    focus = selected.indices.index(active[-1] + 1) + 1
    return SelectionResult(selected=selected, focus_coef=focus, trace=tuple(trace),
                           entry_order=tuple(j + 1 for j in active))
