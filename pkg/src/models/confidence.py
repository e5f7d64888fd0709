import numpy as np
from dataclasses import dataclass
from typing import Tuple

from src.exceptions import DimensionMismatch
from src.models.design_core.design import CandidateModel

KIND_GAMMA = 'posi-gamma'
KIND_XI = 'posi-xi'
KIND_BOUND = 'bound'
KIND_NAIVE = 'naive'


@dataclass(frozen=True)
class CoefInterval:
    coef: int
    column: int
    name: str
    estimate: float
    lower: float
    upper: float
    stderr: float
    constant: float

    @property
    def width(self):
        return 2.0 * self.stderr * self.constant

    def covers(self, value):
        return self.lower <= value <= self.upper

    def to_dict(self):
        return {
            'coef': self.coef, 'column': self.column, 'name': self.name,
            'estimate': self.estimate, 'lower': self.lower, 'upper': self.upper,
            'stderr': self.stderr, 'constant': self.constant,
        }


@dataclass(frozen=True)
class ConfidenceSet:
    """Per-coefficient intervals for one model."""
    model: CandidateModel
    level: float
    intervals: Tuple[CoefInterval, ...]
    constant_kind: str

    @property
    def lengths(self):
        return np.array([iv.upper - iv.lower for iv in self.intervals])

    def covers(self, target):
        """Boolean array: interval j contains target[j]."""
        target = np.atleast_1d(np.asarray(target, dtype=float))
        return np.array([iv.covers(t) for iv, t in zip(self.intervals, target)])

    def interval_for(self, coef):
        for iv in self.intervals:
            if iv.coef == coef:
                return iv
        raise KeyError(f"No interval for coefficient position {coef}")

    def to_dict(self):
        return {
            'model': self.model.to_dict(),
            'level': self.level,
            'constant_kind': self.constant_kind,
            'intervals': [iv.to_dict() for iv in self.intervals],
        }


def assemble_generic_ci(theta_hat, offsets, variances, constant, models=None, column_names=None,
                        constant_kind=KIND_GAMMA, level=None):
    """
    Interval j of model s is theta_hat[offsets[s] + j] +/- sqrt(variances[offsets[s] + j]) * constant.

    `constant` is a PosiConstant or a plain number. Returns one ConfidenceSet per model.
    """
    theta_hat = np.atleast_1d(np.asarray(theta_hat, dtype=float))
    variances = np.atleast_1d(np.asarray(variances, dtype=float))
    offsets = np.atleast_1d(np.asarray(offsets, dtype=int))
    k = theta_hat.shape[0]

    # 1. Shape checks
    if variances.shape != theta_hat.shape:
        raise DimensionMismatch(f"theta_hat has length {k} but variances has length {variances.shape[0]}")
    if offsets.size == 0 or offsets[0] != 0 or np.any(np.diff(offsets) <= 0) or offsets[-1] >= k:
        raise DimensionMismatch(f"Offsets {offsets.tolist()} are inconsistent with k={k}")
    if np.any(variances < 0):
        raise DimensionMismatch("Variances must be nonnegative")
    sizes = np.diff(np.append(offsets, k))
    if models is None:
        models = [CandidateModel(tuple(range(1, m + 1))) for m in sizes]
    if len(models) != len(sizes) or any(M.size != m for M, m in zip(models, sizes)):
        raise DimensionMismatch("Model sizes do not match the offsets")

    value = float(getattr(constant, 'value', constant))
    if level is None:
        level = 1.0 - constant.alpha if hasattr(constant, 'alpha') else float('nan')

    # 2. Intervals
    stderr = np.sqrt(variances)
    half = stderr * value
    lower, upper = theta_hat - half, theta_hat + half

    out = []
    for M, start in zip(models, offsets):
        intervals = []
        for j, column in enumerate(M.indices):
            pos = start + j
            name = column_names[column - 1] if column_names is not None else f"x{column}"
            intervals.append(CoefInterval(
                coef=j + 1, column=column, name=name, estimate=float(theta_hat[pos]),
                lower=float(lower[pos]), upper=float(upper[pos]),
                stderr=float(stderr[pos]), constant=value,
            ))
        out.append(ConfidenceSet(model=M, level=level, intervals=tuple(intervals), constant_kind=constant_kind))
    return out
