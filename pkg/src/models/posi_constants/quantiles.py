import math
import logging
import numpy as np
from dataclasses import dataclass, asdict
from typing import Optional
from joblib import Parallel, delayed
from scipy.stats import norm

from src.config import (
    DEFAULT_DRAWS, DEFAULT_SEED, MIN_DRAWS, MC_CHUNK_SIZE, MC_BLOCK_ELEMENTS, B_ALPHA_TOL
)
from src.exceptions import BadLevel, ConfigError, DomainError
from src.models.posi_constants.correlation import CorrelationMatrix
from src.models.posi_constants.beta import b_alpha_value

METHOD_MONTE_CARLO = 'monte-carlo'
METHOD_CLOSED_FORM = 'closed-form'
METHOD_BOUND = 'bound'


@dataclass(frozen=True)
class PosiConstant:
    value: float
    alpha: float
    method: str
    mc_std_error: float = 0.0
    draws: int = 0
    seed: Optional[int] = None

    def to_dict(self):
        return asdict(self)


def check_level(alpha):
    if not (0.0 < alpha < 1.0):
        raise BadLevel(f"alpha must lie in (0, 1), got {alpha}")


def normal_constant(alpha):
    """Phi^{-1}(1 - alpha/2), the constant for a single coordinate."""
    check_level(alpha)
    return PosiConstant(value=float(norm.ppf(1.0 - alpha / 2.0)), alpha=alpha, method=METHOD_CLOSED_FORM)


def _chunk_max_abs(root, size, seed_seq):
    """max_j |Z_j| for `size` draws Z = root @ eta, generated in row blocks."""
    rng = np.random.default_rng(seed_seq)
    k, r = root.shape
    block = max(1, MC_BLOCK_ELEMENTS // max(k, r))
    out = np.empty(size)
    for start in range(0, size, block):
        stop = min(size, start + block)
        eta = rng.standard_normal((stop - start, r))
        out[start:stop] = np.max(np.abs(eta @ root.T), axis=1)
    return out


def k_quantile(corr, alpha, draws=DEFAULT_DRAWS, seed=DEFAULT_SEED, n_jobs=1):
    """
    Monte-Carlo 1-alpha quantile of ||Z||_inf with Z ~ N(0, corr).

    Draws are split into fixed-size chunks, each with its own substream spawned
    from `seed`, so the result does not depend on `n_jobs`.
    """
    check_level(alpha)
    if draws < MIN_DRAWS:
        raise ConfigError(f"draws must be at least {MIN_DRAWS}, got {draws}")
    if not isinstance(corr, CorrelationMatrix):
        corr = CorrelationMatrix.from_matrix(corr)

    # 1. Per-chunk substreams
    n_chunks = math.ceil(draws / MC_CHUNK_SIZE)
    sizes = [MC_CHUNK_SIZE] * (n_chunks - 1) + [draws - MC_CHUNK_SIZE * (n_chunks - 1)]
    children = np.random.SeedSequence(seed).spawn(n_chunks)

    # 2. Simulate
    parts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_chunk_max_abs)(corr.root, size, child) for size, child in zip(sizes, children)
    )
    sample = np.sort(np.concatenate(parts))

    # 3. Order statistic at ceil((1 - alpha) * draws), 1-based
    idx = min(draws, max(1, math.ceil(round((1.0 - alpha) * draws, 9))))
    value = float(sample[idx - 1])

    # 4. Spacing (Siddiqui) standard error over a +/- sqrt(draws) window
    m = math.ceil(math.sqrt(draws))
    lo, hi = max(1, idx - m), min(draws, idx + m)
    spread = float(sample[hi - 1] - sample[lo - 1])
    std_error = math.sqrt(alpha * (1.0 - alpha) / draws) * spread * draws / (hi - lo)

    logging.info(f"K quantile: k={corr.k}, rank={corr.rank}, alpha={alpha}, value={value:.4f} (se {std_error:.4f})")
    return PosiConstant(value=value, alpha=alpha, method=METHOD_MONTE_CARLO,
                        mc_std_error=std_error, draws=int(draws), seed=seed)


def b_alpha(q, big_n, alpha, tol=B_ALPHA_TOL):
    """Universal constant B_alpha(q, N): closed form at q = 1, quadrature and bisection otherwise."""
    check_level(alpha)
    if int(q) != q or int(big_n) != big_n or q < 1 or big_n < 1:
        raise DomainError(f"q and N must be positive integers, got q={q}, N={big_n}")
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    value = b_alpha_value(int(q), int(big_n), float(alpha), float(tol))
    method = METHOD_CLOSED_FORM if q == 1 else METHOD_BOUND
    return PosiConstant(value=value, alpha=alpha, method=method)


def upper_bound_k(corr, alpha):
    """B_alpha(rank(corr), k): an upper bound for K_{1-alpha}(corr) that needs no simulation."""
    if not isinstance(corr, CorrelationMatrix):
        corr = CorrelationMatrix.from_matrix(corr)
    bound = b_alpha(max(corr.rank, 1), corr.k, alpha)
    return PosiConstant(value=bound.value, alpha=alpha, method=METHOD_BOUND)
