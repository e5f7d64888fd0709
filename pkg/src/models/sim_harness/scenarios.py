import json
import numpy as np
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.config import DEFAULT_ALPHA, DEFAULT_REPS, DEFAULT_SEED, HARNESS_DRAWS, DEFAULT_LINK
from src.exceptions import ConfigError
from src.models.design_core.candidates import enumerate_subsets
from src.models.selectors.registry import SelectorSpec
from src.models.sim_harness.data_gathering import ERROR_ALIASES

DESIGNS = ('independent', 'correlated', 'gaussian_rows')
BETA_PRESETS = ('zero', 'sparse', 'scaled', 'dense')


def resolve_beta(beta, n, length):
    """Explicit vector, or one of the named presets of the given length."""
    if isinstance(beta, str):
        if beta == 'zero':
            return np.zeros(length)
        if beta == 'sparse':
            out = np.zeros(length)
            out[0] = 1.0
            return out
        if beta == 'scaled':
            return np.resize([-1.0, 1.0], length) / np.sqrt(n)
        if beta == 'dense':
            return np.resize([-1.5, 1.5, 0.0], length)
        raise ConfigError(f"Unknown beta preset '{beta}', expected one of {BETA_PRESETS}")
    vector = np.asarray(beta, dtype=float)
    if vector.shape != (length,):
        raise ConfigError(f"beta has length {vector.size}, expected {length}")
    return vector


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    scenario_id: str
    n: int
    p: int
    family: str = 'lm'
    selectors: Tuple[SelectorSpec, ...] = ()
    reps: int = DEFAULT_REPS
    design: str = 'independent'
    rho: float = 0.0
    error_dist: str = 'normal'
    error_shape: float = 5.0
    beta: object = 'zero'
    sigma: float = 1.0
    alpha: float = DEFAULT_ALPHA
    seed: int = DEFAULT_SEED
    misspec: Optional[dict] = None
    candidates: dict = field(default_factory=dict)
    naive: bool = False
    known_sigma: bool = False
    true_link: str = DEFAULT_LINK
    draws: int = HARNESS_DRAWS

    def __post_init__(self):
        if self.reps < 1:
            raise ConfigError(f"reps must be >= 1, got {self.reps}")
        if self.n < 1 or self.p < 1:
            raise ConfigError(f"n and p must be positive, got n={self.n}, p={self.p}")
        if self.family not in ('lm', 'bin'):
            raise ConfigError(f"family must be 'lm' or 'bin', got '{self.family}'")
        if self.design not in DESIGNS:
            raise ConfigError(f"design must be one of {DESIGNS}, got '{self.design}'")
        if ERROR_ALIASES.get(self.error_dist, self.error_dist) not in ERROR_ALIASES.values():
            raise ConfigError(f"Unknown error distribution '{self.error_dist}'")
        if not self.selectors:
            raise ConfigError(f"Scenario '{self.scenario_id}' has no selector")
        labels = [s.label() for s in self.selectors]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"Selector labels must be unique within a scenario, got {labels}")
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.misspec is not None and self.family != 'bin':
            raise ConfigError("Misspecified truths are only supported for binary scenarios")

        # Named presets resolve to explicit vectors before running
        object.__setattr__(self, 'beta_vector', resolve_beta(self.beta, self.n, self.p))
        if self.misspec is not None:
            p_bar = int(self.misspec.get('p_bar', self.p))
            if p_bar < self.p:
                raise ConfigError(f"p_bar={p_bar} must be at least p={self.p}")
            bar = resolve_beta(self.misspec.get('beta_bar', 'dense'), self.n, p_bar)
            object.__setattr__(self, 'beta_bar_vector', bar)

    @property
    def p_true(self):
        return int(self.misspec['p_bar']) if self.misspec else self.p

    def candidate_set(self):
        spec = dict(self.candidates)
        links = spec.get('links')
        if self.family == 'bin' and not links:
            links = [DEFAULT_LINK]
        return enumerate_subsets(
            self.p, spec.get('min_size', 1), spec.get('max_size', self.p),
            forced=spec.get('forced', ()), links=links,
        )

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        raw = data.pop('selectors', None) or [data.pop('selector', None)]
        if raw == [None]:
            raise ConfigError("Scenario needs 'selector' or 'selectors'")
        selectors = tuple(s if isinstance(s, SelectorSpec) else SelectorSpec.from_dict(s) for s in raw)
        try:
            return cls(selectors=selectors, **data)
        except TypeError as e:
            raise ConfigError(f"Invalid scenario fields: {e}") from e

    def to_dict(self):
        beta = self.beta if isinstance(self.beta, str) else [float(b) for b in self.beta]
        return {
            'scenario_id': self.scenario_id, 'n': self.n, 'p': self.p, 'family': self.family,
            'selectors': [s.to_dict() for s in self.selectors], 'reps': self.reps,
            'design': self.design, 'rho': self.rho, 'error_dist': self.error_dist,
            'error_shape': self.error_shape, 'beta': beta, 'sigma': self.sigma, 'alpha': self.alpha,
            'seed': self.seed, 'misspec': self.misspec, 'candidates': dict(self.candidates),
            'naive': self.naive, 'known_sigma': self.known_sigma, 'true_link': self.true_link,
            'draws': self.draws,
        }


def load_scenarios(path):
    """A JSON file holding one scenario object or {"scenarios": [...]}."""
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not read scenario config {path}: {e}") from e
    items = data.get('scenarios', [data]) if isinstance(data, dict) else data
    return [ScenarioConfig.from_dict(item) for item in items]


# --- Desk-scale presets ---
def _table1():
    out = []
    for design in ('independent', 'correlated'):
        for err in ('N', 'L', 'U', 'SN'):
            out.append(ScenarioConfig(
                scenario_id=f"table1_{design}_{err}", n=50, p=10, family='lm',
                selectors=tuple(SelectorSpec('lar_steps', k=k) for k in (1, 2, 3)),
                design=design, error_dist=err, beta=[-4.0, 4.0] + [0.0] * 8, draws=5000,
            ))
    return out


def _table2():
    out = []
    for n_best in (20, 5):
        for name, beta in (('zero', 'zero'), ('nonzero', [2.0, -1.0, 0.0, 0.0, 1.0])):
            out.append(ScenarioConfig(
                scenario_id=f"table2_nbest{n_best}_{name}", n=100, p=5, family='lm',
                selectors=(SelectorSpec('significance_hunting', n_best=n_best, lam=2.0, family='lm'),),
                design='independent', beta=beta,
            ))
    return out


def _table3():
    settings = (('zero', 'small', None), ('sparse', 'small', None), ('scaled', 'small', None),
                ('scaled', 'large', None), ('dense', 'small', {'p_bar': 21, 'beta_bar': 'dense'}),
                ('dense', 'large', {'p_bar': 21, 'beta_bar': 'dense'}))
    out = []
    for beta, size, misspec in settings:
        for n in (30, 100):
            lam = (0.012 if size == 'small' else 0.05) * n
            out.append(ScenarioConfig(
                scenario_id=f"table3_{beta}_{size}_n{n}", n=n, p=10, family='bin',
                selectors=(SelectorSpec('lasso_logistic', lam=lam),),
                design='gaussian_rows', rho=0.2, beta='zero' if misspec else beta,
                misspec=misspec, naive=True,
            ))
    return out


def _table4():
    out = []
    for n_best in (20, 5):
        for name, beta in (('zero', 'zero'), ('nonzero', [-1.0, 1.0, 0.0, 0.0, 0.0])):
            for n in (30, 100):
                out.append(ScenarioConfig(
                    scenario_id=f"table4_nbest{n_best}_{name}_n{n}", n=n, p=5, family='bin',
                    selectors=(SelectorSpec('significance_hunting', n_best=n_best, lam=2.0, family='bin'),),
                    design='gaussian_rows', rho=0.8, beta=beta, naive=True,
                ))
    return out


PRESETS = {
    'table1': _table1,
    'table2': _table2,
    'table3': _table3,
    'table4': _table4,
}


def get_preset(name):
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}', expected one of {sorted(PRESETS)}") from None
