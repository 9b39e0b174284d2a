"""One-dimensional concave maximisation used by the equal-power schemes."""
from __future__ import annotations

import math
from typing import Callable

from .core import SystemConfig, effective_snr
from .montecarlo import McConfig, ergodic_rate

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0
PILOT_SEARCH_RTOL = 1e-4


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float) -> float:
    """Maximiser of a unimodal ``f`` on [lo, hi], to within ``tol``.

    The bracket endpoints are compared with the final interior point so a
    maximum sitting on the boundary is returned exactly.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    a, b = lo, hi
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    if a == lo and f(lo) > fx:
        return lo
    if b == hi and f(hi) > fx:
        return hi
    return x


def equal_power_rate(config: SystemConfig, T_tau: float, mc: McConfig) -> float:
    """Mean ergodic rate with rho_tau = rho_d = rho and pilot length T_tau."""
    rho_eff = effective_snr(config.rho, config.rho, T_tau, config.M)
    frac = (config.T - T_tau) / config.T
    return ergodic_rate(rho_eff, config.M, config.N, frac, mc).mean


def equal_power_pilot_length(config: SystemConfig, mc: McConfig) -> float:
    """Rate-maximising pilot length in [M, T] under equal power.

    The objective uses one seed for every evaluation, so it is a fixed
    (concave) function during the search.
    """
    config.require_data_phase()
    M, T = config.M, config.T
    return golden_section_max(lambda t: equal_power_rate(config, t, mc),
                              M, T, PILOT_SEARCH_RTOL * (T - M))
