import logging
import numpy as np
from dataclasses import dataclass, asdict

from src.exceptions import RankDeficient
from src.models.design_core.design import as_design
from src.models.design_core.linalg import LeastSquaresFactor, numerical_rank


def submatrix(X, M):
    """X[M]: the columns of M in index order."""
    X = as_design(X)
    M.check_bounds(X.p)
    return X.values[:, M.columns]


def leverage_max(X, M):
    """Largest hat-matrix diagonal entry of X[M], via QR."""
    factor = LeastSquaresFactor.from_matrix(submatrix(X, M))
    return float(np.max(factor.hat_diagonal()))


@dataclass(frozen=True)
class ConditionReport:
    rank: int
    p: int
    n: int
    n_max_leverage: float
    eigen_ratio: float
    rank_deficient_models: int

    def to_dict(self):
        return asdict(self)


def condition_x2_report(X, candidates):
    """
    Advisory numbers for the design conditions: rank(X), n times the largest
    leverage over all candidate models, and lambda_max / lambda_min of X'X.
    Rank deficiency is reported, never raised.
    """
    X = as_design(X)
    rank = numerical_rank(X.values)

    eig = np.linalg.eigvalsh(X.values.T @ X.values)
    eigen_ratio = float(eig[-1] / eig[0]) if rank == X.p and eig[0] > 0 else float('inf')

    worst, skipped = 0.0, 0
    for M in candidates:
        try:
            worst = max(worst, leverage_max(X, M))
        except RankDeficient:
            skipped += 1

    if rank < X.p:
        logging.warning(f"Design has rank {rank} < p={X.p}")
    if skipped:
        logging.warning(f"{skipped} candidate model(s) are rank deficient and were left out of the leverage scan")

    return ConditionReport(rank=rank, p=X.p, n=X.n, n_max_leverage=X.n * worst,
                           eigen_ratio=eigen_ratio, rank_deficient_models=skipped)
