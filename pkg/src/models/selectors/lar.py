import numpy as np

from src.exceptions import KTooLarge, RankDeficient
from src.models.design_core.design import CandidateModel, as_design
from src.models.design_core.linalg import numerical_rank
from src.models.selectors.results import SelectionResult

TIE_RTOL = 1e-12


def _first_minimum(values):
    """Smallest index among entries within TIE_RTOL of the minimum."""
    best = np.min(values)
    return int(np.flatnonzero(values <= best + TIE_RTOL * max(abs(best), 1.0))[0])


def lar_steps(X, y, k):
    """
    k steps of plain least-angle regression (no lasso modification).
    The selected model is the active set after step k; focus_coef is the
    position of the k-th entered variable inside that model.
    """
    X = as_design(X)
    xv = X.values
    y = np.asarray(y, dtype=float)
    if k < 1 or k > X.p:
        raise KTooLarge(f"Cannot take {k} LAR steps with p={X.p}")

    # 1. Step one: most correlated column
    corr = xv.T @ y
    abs_corr = np.abs(corr)
    first = int(np.flatnonzero(abs_corr >= abs_corr.max() * (1.0 - TIE_RTOL))[0])
    active = [first]
    mu = np.zeros(X.n)
    trace = [(CandidateModel((first + 1,)).label(), float(abs_corr[first]))]

    # 2. Move along the equiangular direction until the next variable ties
    while len(active) < k:
        corr = xv.T @ (y - mu)
        big_c = np.max(np.abs(corr[active]))
        signs = np.sign(corr[active])
        xa = xv[:, active] * signs
        if numerical_rank(xa) < len(active):
            raise RankDeficient(f"Active set {sorted(j + 1 for j in active)} is rank deficient")

        gram = xa.T @ xa
        g_inv_ones = np.linalg.solve(gram, np.ones(len(active)))
        norm_a = 1.0 / np.sqrt(np.sum(g_inv_ones))
        u = xa @ (norm_a * g_inv_ones)
        a = xv.T @ u

        inactive = np.array([j for j in range(X.p) if j not in active])
        with np.errstate(divide='ignore', invalid='ignore'):
            minus = (big_c - corr[inactive]) / (norm_a - a[inactive])
            plus = (big_c + corr[inactive]) / (norm_a + a[inactive])
        steps = np.where(minus > 1e-14, minus, np.inf)
        steps = np.minimum(steps, np.where(plus > 1e-14, plus, np.inf))
        if not np.any(np.isfinite(steps)):
            raise RankDeficient("No further variable can enter the LAR path")

        pick = _first_minimum(steps)
        mu = mu + steps[pick] * u
        active.append(int(inactive[pick]))
        trace.append((CandidateModel(tuple(sorted(j + 1 for j in active))).label(), float(big_c)))

    selected = CandidateModel(tuple(sorted(j + 1 for j in active)))
    focus = selected.indices.index(active[-1] + 1) + 1
    return SelectionResult(selected=selected, focus_coef=focus, trace=tuple(trace),
                           entry_order=tuple(j + 1 for j in active))
