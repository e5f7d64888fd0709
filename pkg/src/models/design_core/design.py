import numpy as np
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.config import LINKS
from src.exceptions import (
    ConfigError, DataValidationError, IndexOutOfRange, ModelNotInCandidateSet
)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Fixed n x p regressor matrix with column labels."""
    values: np.ndarray
    column_names: Tuple[str, ...] = ()

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise DataValidationError(f"Design must have n >= 1 and p >= 1, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DataValidationError("Design contains non-finite entries")

        names = tuple(self.column_names) or tuple(f"x{j + 1}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise DataValidationError(f"Got {len(names)} column names for {values.shape[1]} columns")

        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'column_names', names)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]


def as_design(X):
    return X if isinstance(X, DesignMatrix) else DesignMatrix(X)


@dataclass(frozen=True)
class CandidateModel:
    """A regressor subset (1-based, strictly increasing), optionally paired with a link."""
    indices: Tuple[int, ...]
    link: Optional[str] = None

    def __post_init__(self):
        indices = tuple(int(j) for j in self.indices)
        if not indices:
            raise ConfigError("Candidate model must contain at least one index")
        if any(j < 1 for j in indices):
            raise IndexOutOfRange(f"Indices are 1-based, got {indices}")
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ConfigError(f"Indices must be strictly increasing, got {indices}")
        if self.link is not None and self.link not in LINKS:
            raise ConfigError(f"Unknown link '{self.link}', expected one of {LINKS}")
        object.__setattr__(self, 'indices', indices)

    @property
    def size(self):
        return len(self.indices)

    @property
    def columns(self):
        """Zero-based column positions."""
        return np.asarray(self.indices, dtype=int) - 1

    def check_bounds(self, p):
        if self.indices[-1] > p:
            raise IndexOutOfRange(f"Index {self.indices[-1]} exceeds p={p}")

    def with_link(self, link):
        return CandidateModel(self.indices, link)

    def label(self):
        text = "{" + ",".join(str(j) for j in self.indices) + "}"
        return f"{text}|{self.link}" if self.link else text

    def to_dict(self):
        out = {'indices': list(self.indices)}
        if self.link is not None:
            out['link'] = self.link
        return out


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """Ordered family of candidate models with stacked offsets rho(M)."""
    models: Tuple[CandidateModel, ...]
    offsets: np.ndarray = field(init=False, repr=False)
    k: int = field(init=False)

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise ConfigError("Candidate set must contain at least one model")
        if len(set(models)) != len(models):
            raise ConfigError("Candidate set contains duplicate models")

        sizes = np.array([m.size for m in models], dtype=int)
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)
        offsets.setflags(write=False)

        object.__setattr__(self, 'models', models)
        object.__setattr__(self, 'offsets', offsets)
        object.__setattr__(self, 'k', int(sizes.sum()))
        object.__setattr__(self, '_position', {m: i for i, m in enumerate(models)})

    @property
    def d(self):
        return len(self.models)

    def __len__(self):
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    def __getitem__(self, i):
        return self.models[i]

    def index_of(self, model):
        try:
            return self._position[model]
        except KeyError:
            raise ModelNotInCandidateSet(f"Model {model.label()} is not in the candidate set") from None

    def __contains__(self, model):
        return model in self._position

    def check_bounds(self, p):
        for m in self.models:
            m.check_bounds(p)

    @property
    def links(self):
        return {m.link for m in self.models}

    def to_dict(self):
        return {'models': [m.to_dict() for m in self.models]}
