"""Pilot-only sensing: LMMSE distortion and the rate-distortion relations.

Optimal power fixes T_tau = M and splits energy between pilots and data;
equal power fixes rho_tau = rho_d = rho and trades pilot length instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    DomainError,
    InfeasibleDistortionError,
    ResourceSplit,
    SystemConfig,
    clamp_to_interval,
    distortion_to_effective_snr,
    min_distortion,
)
from .montecarlo import McConfig
from .search import equal_power_pilot_length


@dataclass(frozen=True)
class PsOptimalDomain:
    D_min: float
    D_star: float


@dataclass(frozen=True)
class PsEqualDomain:
    D_min: float
    D_max: float
    D_star: float
    T_tau_star: float


def mse_pilot_optimal(N: int, M: int, rho_tau: float, T_tau: float) -> float:
    """Sensing MSE with orthogonal equal-power pilots."""
    if T_tau < M:
        raise DomainError(f"T_tau={T_tau} < M={M}")
    if rho_tau < 0:
        raise DomainError(f"rho_tau must be >= 0, got {rho_tau}")
    return N * M / (1.0 + rho_tau * T_tau / M)


def ps_opt_power_split(config: SystemConfig, D: float) -> ResourceSplit:
    config.require_data_phase()
    M, T, rho, NM = config.M, config.T, config.rho, config.NM
    D_min = min_distortion(config.N, M, T, rho)
    if D < D_min * (1 - 1e-12):
        raise InfeasibleDistortionError(f"D={D} below D_min={D_min}")
    D = clamp_to_interval(D, D_min, NM, "ps_opt_power_split")
    if D == D_min:
        # all energy on pilots
        return ResourceSplit(T_tau=M, rho_tau=rho * T / M, rho_d=0.0)
    rho_tau = (NM - D) / D
    rho_d = (rho * T - M * rho_tau) / (T - M)
    if rho_d < 0:
        # rounding just above D_min can leave a negative residue
        if rho_d < -1e-12 * rho * T / (T - M):
            raise InfeasibleDistortionError(f"D={D} needs negative data power")
        rho_d = 0.0
    return ResourceSplit(T_tau=M, rho_tau=rho_tau, rho_d=rho_d)


def ps_opt_rho_eff(config: SystemConfig, D: float) -> float:
    """Effective SNR along the optimal-power PS frontier, in closed form."""
    config.require_data_phase()
    M, N, T, rho, NM = config.M, config.N, config.T, config.rho, config.NM
    D_min = min_distortion(N, M, T, rho)
    D = clamp_to_interval(D, D_min, NM, "ps_opt_rho_eff")
    num = (NM - D) * (D * (rho * T + M) - N * M * M)
    den = D * (D * (rho * T + M) + NM * (T - 2 * M))
    return max(num / den, 0.0)


def ps_opt_domain(config: SystemConfig) -> PsOptimalDomain:
    config.require_data_phase()
    M, N, T, rho = config.M, config.N, config.T, config.rho
    root = math.sqrt((T * (1 + rho) - M) * (T - M) / (M * (rho * T + M)))
    D_star = N * M * M / (T * (1 + rho)) * (1 + root)
    return PsOptimalDomain(D_min=min_distortion(N, M, T, rho), D_star=D_star)


def ps_eq_bounds(config: SystemConfig) -> tuple[float, float]:
    M, N, T, rho = config.M, config.N, config.T, config.rho
    return min_distortion(N, M, T, rho), N * M / (1 + rho)


def ps_eq_T_tau_of_D(config: SystemConfig, D: float) -> float:
    lo, hi = ps_eq_bounds(config)
    D = clamp_to_interval(D, lo, hi, "ps_eq_T_tau_of_D")
    M = config.M
    T_tau = M * (config.NM - D) / (config.rho * D)
    return min(max(T_tau, M), config.T)


def ps_eq_rho_eff(config: SystemConfig, D: float) -> float:
    lo, hi = ps_eq_bounds(config)
    D = clamp_to_interval(D, lo, hi, "ps_eq_rho_eff")
    return distortion_to_effective_snr(config.rho, D, config.N, config.M)


def ps_eq_split(config: SystemConfig, D: float) -> ResourceSplit:
    rho = config.rho
    return ResourceSplit(T_tau=ps_eq_T_tau_of_D(config, D), rho_tau=rho, rho_d=rho)


def ps_eq_domain(config: SystemConfig, mc: McConfig) -> PsEqualDomain:
    config.require_data_phase()
    lo, hi = ps_eq_bounds(config)
    T_tau_star = equal_power_pilot_length(config, mc)
    D_star = mse_pilot_optimal(config.N, config.M, config.rho, T_tau_star)
    return PsEqualDomain(D_min=lo, D_max=hi, D_star=min(max(D_star, lo), hi),
                         T_tau_star=T_tau_star)
