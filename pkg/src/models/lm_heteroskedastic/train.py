import numpy as np
from dataclasses import dataclass

from src.models.design_core.design import CandidateModel, as_design
from src.models.design_core.diagnostics import submatrix
from src.models.design_core.linalg import LeastSquaresFactor


@dataclass(frozen=True, eq=False)
class EickerFit:
    model: CandidateModel
    beta_hat: np.ndarray
    sandwich: np.ndarray
    sigma2_diag: np.ndarray
    residuals: np.ndarray


def eicker_sandwich(X, M, y):
    """
    HC0 sandwich (X'X)^{-1} X' diag(u^2) X (X'X)^{-1}, assembled as A'A
    with A = diag(u) X[M] (X[M]'X[M])^{-1}.
    """
    X = as_design(X)
    y = np.asarray(y, dtype=float)
    xm = submatrix(X, M)
    factor = LeastSquaresFactor.from_matrix(xm)

    beta_hat = factor.solve(y)
    residuals = y - xm @ beta_hat

    a = residuals[:, None] * factor.coefficient_map().T
    sandwich = a.T @ a
    return EickerFit(model=M, beta_hat=beta_hat, sandwich=sandwich,
                     sigma2_diag=np.diag(sandwich).copy(), residuals=residuals)
