import numpy as np
from dataclasses import dataclass, field
from typing import Optional

from src.exceptions import MissingForcedIndex
from src.models.design_core.design import CandidateSet, as_design
from src.models.design_core.diagnostics import submatrix
from src.models.design_core.linalg import LeastSquaresFactor, numerical_rank
from src.models.posi_constants.correlation import CorrelationMatrix


@dataclass(frozen=True, eq=False)
class GammaBlocks:
    """
    The sigma^2-free block matrix Gamma_n held as a k x r factor F, with
    block (s, t) = F_s F_t' = (X_s'X_s)^{-1} X_s'X_t (X_t'X_t)^{-1}.
    """
    candidates: CandidateSet
    factor: np.ndarray
    _corr: Optional[CorrelationMatrix] = field(default=None, repr=False)

    def rows(self, s):
        start = self.candidates.offsets[s]
        return self.factor[start:start + self.candidates.models[s].size]

    def block(self, s, t):
        return self.rows(s) @ self.rows(t).T

    @property
    def matrix(self):
        return self.factor @ self.factor.T

    @property
    def corr(self):
        if self._corr is None:
            object.__setattr__(self, '_corr', CorrelationMatrix.from_factor(self.factor))
        return self._corr


def gamma_blocks(X, candidates):
    """Stacks (X_s'X_s)^{-1} X_s' U for every model, U an orthonormal basis of span(X)."""
    X = as_design(X)
    candidates.check_bounds(X.p)

    # 1. Orthonormal basis of the column span
    u, _, _ = np.linalg.svd(X.values, full_matrices=False)
    basis = u[:, :numerical_rank(X.values)]

    # 2. Per-model coefficient maps projected onto the basis
    pieces = []
    for M in candidates:
        coef_map = LeastSquaresFactor.from_matrix(submatrix(X, M)).coefficient_map()
        pieces.append(coef_map @ basis)
    return GammaBlocks(candidates=candidates, factor=np.vstack(pieces))


def _xi_rows(gamma, coef):
    rows = []
    for s, M in enumerate(gamma.candidates):
        if coef not in M.indices:
            raise MissingForcedIndex(f"Model {M.label()} does not contain coefficient {coef}")
        rows.append(gamma.candidates.offsets[s] + M.indices.index(coef))
    return gamma.factor[rows]


def xi_blocks(gamma, coef=1):
    """d x d matrix whose (s, t) entry is the coefficient-`coef` entry of Gamma block (s, t)."""
    rows = _xi_rows(gamma, coef)
    return rows @ rows.T


def xi_matrix(X, candidates, coef=1, gamma=None):
    """corr(Xi_n) for the coefficient every candidate model contains."""
    gamma = gamma if gamma is not None else gamma_blocks(X, candidates)
    return CorrelationMatrix.from_factor(_xi_rows(gamma, coef))
