"""
Link functions h (continuous CDFs) for binary regression together with
phi1 = log h, phi2 = log(1 - h) and their first two derivatives.

Derivatives are evaluated in closed forms that stay finite for |gamma| <= 35.
Second derivatives of the extreme-value links are of order exp(-exp(|gamma|))
in one tail and underflow to 0 there.
"""
import numpy as np
from dataclasses import dataclass
from typing import Callable
from scipy.special import expit, log_ndtr, ndtr, erfcx

from src.exceptions import ConfigError

SQRT_2 = np.sqrt(2.0)
SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)
INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
SERIES_CUTOFF = 1e-3


@dataclass(frozen=True)
class LinkFunction:
    id: str
    h: Callable
    h_dot: Callable
    phi1: Callable
    phi2: Callable
    phi1_d: Callable
    phi2_d: Callable
    phi1_dd: Callable
    phi2_dd: Callable

    @property
    def canonical(self):
        return self.id == 'logit'

    def weight(self, gamma):
        """h_dot / (h (1 - h)) = phi1' - phi2'."""
        return self.phi1_d(gamma) - self.phi2_d(gamma)


def _arr(gamma):
    return np.asarray(gamma, dtype=float)


# --- logit ---
def _logit_phi1(g):
    return -np.logaddexp(0.0, -_arr(g))


def _logit_phi2(g):
    return -np.logaddexp(0.0, _arr(g))


def _logit_h_dot(g):
    h = expit(_arr(g))
    return h * (1.0 - h)


def _logit_dd(g):
    return -_logit_h_dot(g)


LOGIT = LinkFunction(
    id='logit', h=lambda g: expit(_arr(g)), h_dot=_logit_h_dot,
    phi1=_logit_phi1, phi2=_logit_phi2,
    phi1_d=lambda g: expit(-_arr(g)), phi2_d=lambda g: -expit(_arr(g)),
    phi1_dd=_logit_dd, phi2_dd=_logit_dd,
)


# --- probit ---
def _mills(g):
    """phi(g) / Phi(g), with the erfcx form below zero."""
    g = _arr(g)
    flat = np.atleast_1d(g)
    out = np.empty_like(flat)
    neg = flat < 0
    out[neg] = SQRT_2_OVER_PI / erfcx(-flat[neg] / SQRT_2)
    pos = ~neg
    out[pos] = INV_SQRT_2PI * np.exp(-0.5 * flat[pos] ** 2) / ndtr(flat[pos])
    return out.reshape(g.shape)


def _probit_phi1_dd(g):
    g = _arr(g)
    m = _mills(g)
    return -m * (g + m)


def _probit_phi2_dd(g):
    g = _arr(g)
    m = _mills(-g)
    return -m * (m - g)


PROBIT = LinkFunction(
    id='probit', h=lambda g: ndtr(_arr(g)),
    h_dot=lambda g: INV_SQRT_2PI * np.exp(-0.5 * _arr(g) ** 2),
    phi1=lambda g: log_ndtr(_arr(g)), phi2=lambda g: log_ndtr(-_arr(g)),
    phi1_d=_mills, phi2_d=lambda g: -_mills(-_arr(g)),
    phi1_dd=_probit_phi1_dd, phi2_dd=_probit_phi2_dd,
)


# --- complementary log-log: h = 1 - exp(-e^g) ---
def _g_ratio(u):
    """u / (e^u - 1), equal to 1 at u = 0."""
    with np.errstate(over='ignore'):
        return np.where(u < SERIES_CUTOFF, 1.0 - u / 2.0 + u * u / 12.0, u / np.expm1(np.maximum(u, SERIES_CUTOFF)))


def _g_ratio_d(u):
    """Derivative of u / (e^u - 1)."""
    small = u < SERIES_CUTOFF
    us = np.where(small, SERIES_CUTOFF, u)
    with np.errstate(over='ignore', under='ignore', invalid='ignore'):
        em = np.expm1(-us)
        large = np.exp(-us) * (-em - us) / (em * em)
    series = -0.5 + u / 6.0 - u ** 3 / 180.0
    return np.where(small, series, large)


def _cloglog_phi1(g):
    with np.errstate(over='ignore'):
        u = np.exp(_arr(g))
        return np.where(u > np.log(2.0), np.log1p(-np.exp(-u)), np.log(-np.expm1(-np.minimum(u, 1.0))))


def _cloglog_h_dot(g):
    with np.errstate(over='ignore', under='ignore'):
        u = np.exp(_arr(g))
        return u * np.exp(-u)


def _cloglog_phi1_d(g):
    with np.errstate(over='ignore'):
        return _g_ratio(np.exp(_arr(g)))


def _cloglog_phi1_dd(g):
    with np.errstate(over='ignore'):
        u = np.exp(_arr(g))
        return u * _g_ratio_d(u)


def _neg_exp(g):
    with np.errstate(over='ignore'):
        return -np.exp(_arr(g))


CLOGLOG = LinkFunction(
    id='cloglog', h=lambda g: -np.expm1(-np.exp(_arr(g))), h_dot=_cloglog_h_dot,
    phi1=_cloglog_phi1, phi2=_neg_exp,
    phi1_d=_cloglog_phi1_d, phi2_d=_neg_exp,
    phi1_dd=_cloglog_phi1_dd, phi2_dd=_neg_exp,
)


# --- log-log: h(g) = exp(-e^{-g}) = 1 - cloglog.h(-g) ---
LOGLOG = LinkFunction(
    id='loglog', h=lambda g: np.exp(-np.exp(-_arr(g))),
    h_dot=lambda g: _cloglog_h_dot(-_arr(g)),
    phi1=lambda g: _neg_exp(-_arr(g)), phi2=lambda g: _cloglog_phi1(-_arr(g)),
    phi1_d=lambda g: -_neg_exp(-_arr(g)), phi2_d=lambda g: -_cloglog_phi1_d(-_arr(g)),
    phi1_dd=lambda g: _neg_exp(-_arr(g)), phi2_dd=lambda g: _cloglog_phi1_dd(-_arr(g)),
)

LINK_REGISTRY = {link.id: link for link in (LOGIT, PROBIT, CLOGLOG, LOGLOG)}


def get_link(link):
    if isinstance(link, LinkFunction):
        return link
    try:
        return LINK_REGISTRY[link]
    except KeyError:
        raise ConfigError(f"Unknown link '{link}', expected one of {sorted(LINK_REGISTRY)}") from None
