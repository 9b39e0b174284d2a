"""Low- and high-SNR effective-SNR approximations for PS versus DAS.

Throughout, a scheme's distortion D is turned into an effective SNR with
rho_d * (NM - D) / (NM + rho_d * D), so both schemes are compared on the same
footing. K = T_d / M is the normalised data length used at high SNR.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import das_sensing as das
from .core import DomainError, Power, Sensing, SystemConfig
from .search import golden_section_max

LOW_SNR_DB = -20.0
HIGH_SNR_DB = 30.0


class Regime(str, enum.Enum):
    LOW = "LowSnr"
    HIGH = "HighSnr"


@dataclass(frozen=True)
class AsymptoticReport:
    regime: Regime
    policy: Power
    rho_eff_ps: float
    rho_eff_das: float
    gain_ratio: float
    K: float | None = None


def regime_of(rho_db: float) -> str:
    if rho_db <= LOW_SNR_DB:
        return "low"
    if rho_db >= HIGH_SNR_DB:
        return "high"
    return "mid"


def _check_K(K: float) -> None:
    if not K > 1:
        raise DomainError(f"K must exceed 1, got {K}")


def low_snr_eff_snr(config: SystemConfig, policy: Power, rho: float) -> tuple[float, float]:
    """First-order (ps, das) effective SNRs as rho -> 0."""
    M, T = config.M, config.T
    config.require_data_phase()
    if policy is Power.OPTIMAL:
        ps = T * T * rho * rho / (4 * M * (T - M))
        return ps, 2 * ps
    ps = rho * rho * T / (2 * M) if T >= 2 * M else rho * rho
    return ps, rho * rho * T / M


def low_snr_report(config: SystemConfig, policy: Power, rho: float) -> AsymptoticReport:
    ps, das_ = low_snr_eff_snr(config, policy, rho)
    return AsymptoticReport(Regime.LOW, policy, ps, das_, das_ / ps)


def _sqrt_gap(K: float) -> float:
    # sqrt(K^2 + 4) - K without cancellation at large K
    return 4.0 / (math.sqrt(K * K + 4.0) + K)


def high_snr_eff_snr(policy: Power, scheme: Sensing, K: float, rho: float) -> float:
    """Table-style high-SNR effective SNR for one scheme/policy pair."""
    _check_K(K)
    if scheme is Sensing.PS:
        if policy is Power.OPTIMAL:
            return (1 + K) / (1 + math.sqrt(K)) ** 2 * rho
        return 0.5 * rho
    if policy is Power.OPTIMAL:
        # a lower bound; the two branches meet at K = 2
        if K < 2:
            return (1 + K) / 4 * rho
        return (K * K - 1) / (K * K) * rho
    return 2.0 / (2.0 + _sqrt_gap(K)) * rho


def high_snr_gain_ratio(policy: Power, K: float) -> float:
    _check_K(K)
    if policy is Power.OPTIMAL:
        if K < 2:
            return (1 + math.sqrt(K)) ** 2 / 4
        return (K - 1) * (1 + math.sqrt(K)) ** 2 / (K * K)
    return 4.0 / (2.0 + _sqrt_gap(K))


def high_snr_report(policy: Power, K: float, rho: float) -> AsymptoticReport:
    ps = high_snr_eff_snr(policy, Sensing.PS, K, rho)
    das_ = high_snr_eff_snr(policy, Sensing.DAS, K, rho)
    return AsymptoticReport(Regime.HIGH, policy, ps, das_, das_ / ps, K)


# -- exact values through the finite-SNR distortion maps

def _mapped(rho_d: float, d_norm: float) -> float:
    """Effective SNR from a normalised distortion D / NM."""
    return rho_d * (1.0 - d_norm) / (1.0 + rho_d * d_norm)


def ps_mapped_eff_snr(rho_tau: float, rho_d: float, T_tau: float, M: int) -> float:
    return _mapped(rho_d, 1.0 / (1.0 + rho_tau * T_tau / M))


def das_mapped_eff_snr(rho_tau: float, rho_d: float, T_tau: float, T: float, M: int) -> float:
    c = 1.0 + rho_tau * T_tau / M
    d_norm = das._rmt_mse(1, M, c, rho_d, T - T_tau) / M
    return _mapped(rho_d, d_norm)


def _best_on_energy_line(f, K: float, rho: float) -> float:
    """Maximise f(rho_tau, rho_d) over rho_tau + K*rho_d = (1+K)*rho, T_tau = M."""
    hi = (1 + K) * rho / K
    grid = np.linspace(0.0, hi, 401)
    vals = [f((1 + K) * rho - K * x, x) for x in grid]
    i = int(np.argmax(vals))
    lo_b, hi_b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    x = golden_section_max(lambda x: f(max((1 + K) * rho - K * x, 0.0), x),
                           lo_b, hi_b, 1e-12 * hi)
    return max(vals[i], f(max((1 + K) * rho - K * x, 0.0), x))


def exact_high_snr_eff_snr(policy: Power, scheme: Sensing, K: float, rho: float) -> float:
    """Effective SNR at finite rho with T_tau = M, using the exact distortion maps.

    Only T_d / M enters, so the computation runs at M = 1, T = 1 + K.
    """
    _check_K(K)
    M, T = 1, 1.0 + K
    if scheme is Sensing.PS:
        f = lambda rt, rd: ps_mapped_eff_snr(rt, rd, M, M)
    else:
        f = lambda rt, rd: das_mapped_eff_snr(rt, rd, M, T, M)
    if policy is Power.EQUAL:
        return f(rho, rho)
    return _best_on_energy_line(f, K, rho)


@dataclass(frozen=True)
class LowSnrTrace:
    policy: Power
    rho: tuple[float, ...]
    ps: tuple[float, ...]
    das: tuple[float, ...]
    ratio: tuple[float, ...]
    limit: float


def low_snr_limit_ratio(config: SystemConfig, policy: Power) -> float:
    ps, das_ = low_snr_eff_snr(config, policy, 1.0)
    return das_ / ps


def verify_low_snr_limit(config: SystemConfig, rho_grid: Sequence[float],
                         policy: Power = Power.OPTIMAL) -> LowSnrTrace:
    """Exact DAS/PS effective-SNR ratios at the low-SNR allocations.

    Optimal power uses the AM-GM split rho_tau*M = rho_d*(T-M) = rho*T/2 at
    T_tau = M; equal power uses rho_tau = rho_d = rho at T_tau = max(M, T/2).
    Both schemes are evaluated at the same split.
    """
    config.require_data_phase()
    M, T = config.M, config.T
    ps_vals, das_vals = [], []
    for rho in rho_grid:
        if not 0 < rho <= 0.1:
            raise DomainError(f"low-SNR check expects rho in (0, 0.1], got {rho}")
        if policy is Power.OPTIMAL:
            T_tau, rho_tau, rho_d = M, rho * T / (2 * M), rho * T / (2 * (T - M))
        else:
            T_tau, rho_tau, rho_d = max(M, T / 2), rho, rho
        ps_vals.append(ps_mapped_eff_snr(rho_tau, rho_d, T_tau, M))
        das_vals.append(das_mapped_eff_snr(rho_tau, rho_d, T_tau, T, M))
    ratio = tuple(d / p for d, p in zip(das_vals, ps_vals))
    return LowSnrTrace(policy, tuple(rho_grid), tuple(ps_vals), tuple(das_vals), ratio,
                       low_snr_limit_ratio(config, policy))


@dataclass(frozen=True)
class ConvergenceReport:
    K: tuple[float, ...]
    das_gap: tuple[float, ...]
    ps_gap: tuple[float, ...]
    das_slope: float
    ps_slope: float


def verify_high_snr_convergence(K_grid: Sequence[float]) -> ConvergenceReport:
    """Relative gaps 1 - rho_eff/rho for the optimal-power forms and their log-log slopes."""
    K = np.asarray(K_grid, dtype=float)
    if K.size < 2 or np.any(K < 2):
        raise DomainError("need at least two K values, all >= 2")
    # 1 - rho_eff/rho in cancellation-free form: 1/K^2 and 2 sqrt(K)/(1 + sqrt(K))^2
    das_gap = 1.0 / K ** 2
    ps_gap = 2.0 * np.sqrt(K) / (1.0 + np.sqrt(K)) ** 2
    logK = np.log(K)
    das_slope = float(np.polyfit(logK, np.log(das_gap), 1)[0])
    ps_slope = float(np.polyfit(logK, np.log(ps_gap), 1)[0])
    return ConvergenceReport(tuple(K.tolist()), tuple(das_gap.tolist()),
                             tuple(ps_gap.tolist()), das_slope, ps_slope)
