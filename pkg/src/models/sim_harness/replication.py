import logging
import numpy as np
from dataclasses import dataclass, field
from typing import Optional, Tuple

from src.config import DEFAULT_SEED
from src.exceptions import PosiError
from src.models.design_core.design import DesignMatrix
from src.models.lm_homoskedastic.train import target_lm
from src.models.lm_homoskedastic.predictions import posi_constant_lm, ci_lm, ci_lm_naive
from src.models.binreg.train import fit_mle, pseudo_target
from src.models.binreg.predictions import ci_bin, naive_ci_bin
from src.models.selectors.registry import run_selector
from src.models.sim_harness.data_gathering import gen_design, gen_response

STATUS_OK = 'ok'
STATUS_SKIPPED = 'skipped'


@dataclass(frozen=True)
class ProcedureOutcome:
    """What one procedure produced in one replication."""
    procedure: str
    status: str
    covered: Optional[bool] = None
    simultaneous: Optional[bool] = None
    length: Optional[float] = None
    columns: Tuple[int, ...] = ()
    column_covered: Tuple[bool, ...] = ()
    reason: str = ''


@dataclass(frozen=True)
class ReplicationResult:
    rep: int
    outcomes: Tuple[ProcedureOutcome, ...] = field(default_factory=tuple)


def replication_streams(seed, rep):
    """
    (data rng, constant seed) for replication `rep`. Keyed by the replication
    index so results do not depend on scheduling.
    """
    root = np.random.SeedSequence(DEFAULT_SEED if seed is None else seed, spawn_key=(rep,))
    data_seq, constant_seq = root.spawn(2)
    return np.random.default_rng(data_seq), int(constant_seq.generate_state(1)[0])


def selector_procedures(config, spec):
    names = [f"{spec.label()}_posi"]
    if config.naive:
        names.append(f"{spec.label()}_naive")
    return names


def procedure_names(config):
    return [name for spec in config.selectors for name in selector_procedures(config, spec)]


def _outcome(name, conf_set, target, focus):
    covers = conf_set.covers(target)
    interval = conf_set.interval_for(focus)
    return ProcedureOutcome(
        procedure=name, status=STATUS_OK, covered=bool(covers[focus - 1]),
        simultaneous=bool(np.all(covers)), length=float(interval.upper - interval.lower),
        columns=conf_set.model.indices, column_covered=tuple(bool(c) for c in covers),
    )


def _skipped(names, reason):
    return [ProcedureOutcome(procedure=name, status=STATUS_SKIPPED, reason=reason) for name in names]


def _lm_procedures(config, X, y, mu, candidates, spec, selection, k_const):
    label = spec.label()
    selected, focus = selection.selected, selection.focus_coef or 1
    sigma2 = config.sigma ** 2 if config.known_sigma else None
    target = target_lm(X, selected, mu)

    out = [_outcome(f"{label}_posi", ci_lm(X, y, candidates, config.alpha, selected,
                                           k_const=k_const, sigma2=sigma2), target, focus)]
    if config.naive:
        out.append(_outcome(f"{label}_naive", ci_lm_naive(X, y, config.alpha, selected, sigma2=sigma2),
                            target, focus))
    return out


def _bin_procedures(config, X, y, prob, candidates, spec, selection, b_const):
    label = spec.label()
    selected, focus = selection.selected, selection.focus_coef or 1
    fit = fit_mle(y, X, selected)
    target = pseudo_target(prob, X, selected, link=fit.link, tau=0.0)

    out = [_outcome(f"{label}_posi", ci_bin(X, y, candidates, config.alpha, selected,
                                            constant=b_const, fit=fit), target, focus)]
    if config.naive:
        out.append(_outcome(f"{label}_naive", naive_ci_bin(X, y, config.alpha, selected, fit=fit),
                            target, focus))
    return out


def run_replication(config, rep, candidates, b_const=None):
    """
    One replication: fresh design and response, then every selector with its
    POSI (and optionally naive) intervals. Failures inside a selector or fit are
    recorded as skipped outcomes for that selector's procedures.
    """
    rng, constant_seed = replication_streams(config.seed, rep)

    # 1. Data
    X_full = gen_design(config, rng, width=config.p_true)
    X = X_full if X_full.p == config.p else DesignMatrix(X_full.values[:, :config.p])
    y, truth = gen_response(config, X_full, rng)

    # 2. Homoskedastic constant depends on the resampled design
    k_const = None
    if config.family == 'lm':
        k_const = posi_constant_lm(X, candidates, config.alpha, draws=config.draws,
                                   seed=constant_seed, use_cache=False)

    # 3. Selectors and intervals
    outcomes = []
    for spec in config.selectors:
        names = selector_procedures(config, spec)
        try:
            selection = run_selector(spec, X, y, candidates)
            if config.family == 'lm':
                outcomes.extend(_lm_procedures(config, X, y, truth, candidates, spec, selection, k_const))
            else:
                outcomes.extend(_bin_procedures(config, X, y, truth, candidates, spec, selection, b_const))
        except PosiError as e:
            logging.error(f"Replication {rep}, {spec.label()}: skipped ({type(e).__name__}: {e})")
            outcomes.extend(_skipped(names, type(e).__name__))

    return ReplicationResult(rep=rep, outcomes=tuple(outcomes))
