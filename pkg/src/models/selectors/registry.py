from dataclasses import dataclass, field
from typing import Any, Optional

from src.exceptions import ConfigError
from src.models.design_core.design import CandidateModel
from src.models.selectors.results import SelectionResult
from src.models.selectors.lar import lar_steps
from src.models.selectors.stepwise import forward_stepwise
from src.models.selectors.lasso import lasso_logistic
from src.models.selectors.hunting import significance_hunting, penalized_loglik_rank, max_t, FAMILIES

KINDS = (
    'forward_stepwise', 'lar_steps', 'lasso_logistic', 'significance_hunting',
    'penalized_loglik', 'fixed', 'max_t',
)
TIE_BREAK = 'smallest-index'


@dataclass(frozen=True)
class SelectorSpec:
    """
    Declarative selector description, e.g.
    {"kind": "significance_hunting", "n_best": 20, "lambda": 2, "family": "lm"}.
    """
    kind: str
    k: Optional[int] = None
    lam: float = 0.0
    n_best: Optional[int] = None
    family: str = 'lm'
    model: Optional[CandidateModel] = None
    variance_rule: str = 'model'
    coef: int = 1
    tie_break: str = TIE_BREAK
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown selector kind '{self.kind}', expected one of {KINDS}")
        if self.kind in ('forward_stepwise', 'lar_steps') and (self.k is None or self.k < 1):
            raise ConfigError(f"{self.kind} needs k >= 1")
        if self.lam < 0:
            raise ConfigError(f"lambda must be nonnegative, got {self.lam}")
        if self.kind == 'significance_hunting' and (self.n_best is None or self.n_best < 1):
            raise ConfigError("significance_hunting needs n_best >= 1")
        if self.kind == 'fixed' and self.model is None:
            raise ConfigError("fixed selector needs a model")
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {FAMILIES}, got '{self.family}'")

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        try:
            kind = data.pop('kind')
        except KeyError:
            raise ConfigError("Selector config needs a 'kind'") from None
        model = data.pop('model', None)
        if isinstance(model, dict):
            model = CandidateModel(tuple(model['indices']), model.get('link'))
        elif model is not None:
            model = CandidateModel(tuple(model))
        return cls(
            kind=kind, k=data.pop('k', None), lam=float(data.pop('lambda', 0.0)),
            n_best=data.pop('n_best', None), family=data.pop('family', 'lm'), model=model,
            variance_rule=data.pop('variance_rule', 'model'), coef=int(data.pop('coef', 1)),
            tie_break=data.pop('tie_break', TIE_BREAK), extra=data,
        )

    def to_dict(self):
        out = {'kind': self.kind}
        if self.k is not None:
            out['k'] = self.k
        if self.kind in ('lasso_logistic', 'significance_hunting', 'penalized_loglik'):
            out['lambda'] = self.lam
        if self.n_best is not None:
            out['n_best'] = self.n_best
        if self.kind in ('significance_hunting', 'penalized_loglik', 'max_t'):
            out['family'] = self.family
        if self.kind == 'significance_hunting':
            out['variance_rule'] = self.variance_rule
        if self.kind == 'max_t':
            out['coef'] = self.coef
        if self.model is not None:
            out['model'] = self.model.to_dict()
        out.update(self.extra)
        return out

    def label(self):
        if self.k is not None:
            return f"{self.kind}_k{self.k}"
        if self.n_best is not None:
            return f"{self.kind}_n{self.n_best}"
        return self.kind


def run_selector(selector, X, y, candidates=None, n_jobs=1):
    """
    Runs a SelectorSpec, or any callable (X, y) -> CandidateModel | SelectionResult.
    """
    if callable(selector) and not isinstance(selector, SelectorSpec):
        out = selector(X, y)
        return out if isinstance(out, SelectionResult) else SelectionResult(selected=out, focus_coef=1)

    spec = selector
    if spec.kind == 'lar_steps':
        return lar_steps(X, y, spec.k)
    if spec.kind == 'forward_stepwise':
        return forward_stepwise(X, y, spec.k)
    if spec.kind == 'lasso_logistic':
        return lasso_logistic(X, y, spec.lam)
    if spec.kind == 'fixed':
        return SelectionResult(selected=spec.model, focus_coef=1)

    if candidates is None:
        raise ConfigError(f"Selector '{spec.kind}' needs a candidate set")
    if spec.kind == 'significance_hunting':
        return significance_hunting(X, y, candidates, spec.n_best, spec.lam, spec.family,
                                    spec.variance_rule, n_jobs=n_jobs)
    if spec.kind == 'max_t':
        return max_t(X, y, candidates, spec.family, spec.coef, n_jobs=n_jobs)

    # penalized_loglik: the ranking winner
    notes = []
    ranked = penalized_loglik_rank(X, y, candidates, spec.lam, spec.family, n_jobs=n_jobs, notes=notes)
    return SelectionResult(selected=ranked[0].model, focus_coef=1,
                           trace=tuple((r.model.label(), r.criterion) for r in ranked), notes=tuple(notes))
