"""Data-aided sensing: Jensen bound, large-system MSE and rate-distortion maps.

The large-system MSE solves the Marchenko-Pastur self-consistent equation for
the normalised resolvent trace x of (c I + rho_d/M G G^H)^-1, which reduces to

    c*rho_d*x**2 + b*x - 1 = 0,    b = c + rho_d*T_d/M - rho_d.

The positive root is always evaluated as 2 / (b + sqrt(b**2 + 4*c*rho_d)).
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
    effective_snr,
    min_distortion,
)
from .montecarlo import McConfig
from .search import equal_power_pilot_length

# |T - 2M| below this fraction of T is treated as the linear (T = 2M) case
T2M_RTOL = 1e-9


@dataclass(frozen=True)
class RmtParams:
    c: float
    rho_d: float
    gamma: float

    def __post_init__(self):
        if self.c < 1:
            raise DomainError(f"c must be >= 1, got {self.c}")
        if self.rho_d < 0:
            raise DomainError(f"rho_d must be >= 0, got {self.rho_d}")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")

    @property
    def b(self) -> float:
        return self.c + self.rho_d / self.gamma - self.rho_d


@dataclass(frozen=True)
class DasOptimalDomain:
    D_min: float
    D_star: float
    rho_d_star: float
    D_max: float


@dataclass(frozen=True)
class DasEqualDomain:
    D_min: float
    D_star: float
    T_tau_star: float
    D_max: float


def jensen_lower_bound(N: int, M: int, T: float, rho: float) -> float:
    return min_distortion(N, M, T, rho)


def _resolvent_root(c: float, rho_d: float, b: float) -> float:
    return 2.0 / (b + math.sqrt(b * b + 4.0 * c * rho_d))


def _rmt_mse(N: int, M: int, c: float, rho_d: float, T_d: float) -> float:
    # T_d = 0 is allowed here: it is the all-pilot endpoint, where the root is 1/c
    b = c + rho_d * T_d / M - rho_d
    return N * M * _resolvent_root(c, rho_d, b)


def rmt_mse(N: int, M: int, c: float, rho_d: float, T_d: float) -> float:
    """Large-system sensing MSE of data-aided sensing.

    >>> round(rmt_mse(16, 16, 2.0, 1.0, 64.0), 3)
    47.652
    """
    if c < 1:
        raise DomainError(f"c must be >= 1, got {c}")
    if not T_d > 0:
        raise DomainError(f"T_d must be positive, got {T_d}")
    if rho_d < 0:
        raise DomainError(f"rho_d must be >= 0, got {rho_d}")
    return _rmt_mse(N, M, c, rho_d, T_d)


def stieltjes_residual(x: float, c: float, rho_d: float, gamma: float) -> float:
    b = c + rho_d / gamma - rho_d
    return c * rho_d * x * x + b * x - 1.0


def matched_jensen(N: int, M: int, c: float, rho_d: float, T_d: float) -> float:
    """Jensen bound at an explicit (c, rho_d, T_d) operating point."""
    return N * M * M / (M * c + rho_d * T_d)


# -- optimal power: T_tau = M, energy split along rho_tau*M + rho_d*(T-M) = rho*T

def das_opt_rho_tau(config: SystemConfig, rho_d: float) -> float:
    M, T = config.M, config.T
    return max((config.rho * T - rho_d * (T - M)) / M, 0.0)


def das_opt_rho_d_max(config: SystemConfig) -> float:
    return config.rho * config.T / (config.T - config.M)


def das_opt_distortion(config: SystemConfig, rho_d: float) -> float:
    """Large-system MSE at T_tau = M with the energy budget saturated."""
    c = 1.0 + das_opt_rho_tau(config, rho_d)
    return _rmt_mse(config.N, config.M, c, rho_d, config.T - config.M)


def _das_opt_D_max(config: SystemConfig) -> float:
    return das_opt_distortion(config, das_opt_rho_d_max(config))


def das_opt_rho_d_of_D(config: SystemConfig, D: float) -> float:
    """Data SNR that meets distortion D with T_tau = M and full energy."""
    config.require_data_phase()
    M, N, T, rho = config.M, config.N, config.T, config.rho
    D_min = min_distortion(N, M, T, rho)
    if D < D_min * (1 - 1e-12):
        raise InfeasibleDistortionError(f"D={D} below D_min={D_min}")
    D_max = _das_opt_D_max(config)
    if D > D_max * (1 + 1e-12):
        raise InfeasibleDistortionError(
            f"D={D} needs rho_d above {das_opt_rho_d_max(config)} (negative pilot power)")
    D = min(max(D, D_min), D_max)
    if D == D_min:
        return 0.0
    if D == D_max:
        return das_opt_rho_d_max(config)
    u = 1.0 + rho * T / M
    kappa = N * M / D
    gap = max(u - kappa, 0.0)
    root = math.sqrt(gap * gap + 4.0 * (T - M) / M * kappa * gap)
    rho_d = M * (gap + root) / (2.0 * (T - M))
    return min(rho_d, das_opt_rho_d_max(config))


def das_opt_split(config: SystemConfig, D: float) -> ResourceSplit:
    rho_d = das_opt_rho_d_of_D(config, D)
    return ResourceSplit(T_tau=config.M, rho_tau=das_opt_rho_tau(config, rho_d), rho_d=rho_d)


def das_opt_rho_eff(config: SystemConfig, D: float) -> float:
    s = das_opt_split(config, D)
    return effective_snr(s.rho_tau, s.rho_d, s.T_tau, config.M)


def das_opt_rho_d_star(config: SystemConfig) -> float:
    """Data SNR maximising the pilot-only effective SNR along the energy line.

    Written in the rationalised form P(M+P) / ((T-M)(M+P+sqrt(...))), which
    agrees with the textbook root for T != 2M and stays finite at T = 2M.
    """
    config.require_data_phase()
    M, T = config.M, config.T
    P = config.rho * T
    if abs(T - 2 * M) < T2M_RTOL * T:
        return P / (2.0 * (T - M))
    A = M + P
    root = math.sqrt(A * A + A * (2 * M - T) * P / (T - M))
    return A * P / ((T - M) * (A + root))


def das_opt_domain(config: SystemConfig) -> DasOptimalDomain:
    config.require_data_phase()
    rho_d_star = das_opt_rho_d_star(config)
    return DasOptimalDomain(
        D_min=min_distortion(config.N, config.M, config.T, config.rho),
        D_star=das_opt_distortion(config, rho_d_star),
        rho_d_star=rho_d_star,
        D_max=_das_opt_D_max(config),
    )


# -- equal power: rho_tau = rho_d = rho, pilot length is the free variable

def das_eq_b(config: SystemConfig) -> float:
    rho = config.rho
    return 1.0 + rho * config.T / config.M - rho


def das_eq_distortion(config: SystemConfig, T_tau: float) -> float:
    """Large-system MSE under equal power as a function of pilot length."""
    M, T, rho = config.M, config.T, config.rho
    if not M <= T_tau <= T:
        raise DomainError(f"T_tau={T_tau} outside [{M}, {T}]")
    c = 1.0 + rho * T_tau / M
    return config.NM * _resolvent_root(c, rho, das_eq_b(config))


def das_eq_bounds(config: SystemConfig) -> tuple[float, float]:
    M, N, T, rho = config.M, config.N, config.T, config.rho
    return min_distortion(N, M, T, rho), das_eq_distortion(config, M)


def das_eq_T_tau_of_D(config: SystemConfig, D: float) -> float:
    lo, hi = das_eq_bounds(config)
    D = clamp_to_interval(D, lo, hi, "das_eq_T_tau_of_D")
    M, rho = config.M, config.rho
    kappa = config.NM / D
    T_tau = (M / rho) * (kappa * (kappa - das_eq_b(config)) / rho - 1.0)
    return min(max(T_tau, M), config.T)


def das_eq_split(config: SystemConfig, D: float) -> ResourceSplit:
    rho = config.rho
    return ResourceSplit(T_tau=das_eq_T_tau_of_D(config, D), rho_tau=rho, rho_d=rho)


def das_eq_domain(config: SystemConfig, mc: McConfig) -> DasEqualDomain:
    config.require_data_phase()
    lo, hi = das_eq_bounds(config)
    T_tau_star = equal_power_pilot_length(config, mc)
    return DasEqualDomain(D_min=lo, D_star=das_eq_distortion(config, T_tau_star),
                          T_tau_star=T_tau_star, D_max=hi)
