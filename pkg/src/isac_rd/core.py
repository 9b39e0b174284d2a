"""Domain types and the SNR/distortion relations shared by every scheme.

All SNRs are linear and all distortions are absolute (not divided by NM).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

ENERGY_RTOL = 1e-9
# relative slack for treating a distortion as sitting on an interval endpoint
ENDPOINT_RTOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of a closed-form relation."""


class InfeasibleDistortionError(DomainError):
    """The requested distortion cannot be met under the energy budget."""


class DegenerateConfigError(ValueError):
    """The configuration leaves no data phase (T <= M)."""


class InvalidSplitError(ValueError):
    """A resource split violates the pilot-length or energy constraint."""


class Sensing(str, enum.Enum):
    PS = "PS"
    DAS = "DAS"


class Power(str, enum.Enum):
    OPTIMAL = "OptimalPower"
    EQUAL = "EqualPower"


@dataclass(frozen=True)
class SystemConfig:
    M: int
    N: int
    T: float
    rho: float

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError(f"M must be a positive integer, got {self.M}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.T >= self.M:
            raise ValueError(f"T must be at least M, got T={self.T}, M={self.M}")

    @property
    def NM(self) -> int:
        return self.N * self.M

    @property
    def has_data_phase(self) -> bool:
        return self.T > self.M

    def require_data_phase(self) -> None:
        if not self.has_data_phase:
            raise DegenerateConfigError(
                f"T={self.T} leaves no data phase for M={self.M}")

    @classmethod
    def from_db(cls, M: int, N: int, T: float, snr_db: float) -> "SystemConfig":
        return cls(M=M, N=N, T=T, rho=db_to_linear(snr_db))


@dataclass(frozen=True)
class ResourceSplit:
    T_tau: float
    rho_tau: float
    rho_d: float

    def data_length(self, config: SystemConfig) -> float:
        return config.T - self.T_tau

    def energy(self, config: SystemConfig) -> float:
        return self.rho_tau * self.T_tau + self.rho_d * (config.T - self.T_tau)


@dataclass(frozen=True)
class SchemeSpec:
    sensing: Sensing
    power: Power

    @property
    def slug(self) -> str:
        return f"{self.sensing.value.lower()}-{'opt' if self.power is Power.OPTIMAL else 'eq'}"

    @classmethod
    def from_slug(cls, slug: str) -> "SchemeSpec":
        try:
            sensing, power = slug.lower().split("-")
            return cls(Sensing(sensing.upper()),
                       {"opt": Power.OPTIMAL, "eq": Power.EQUAL}[power])
        except (ValueError, KeyError):
            raise ValueError(
                f"unknown scheme {slug!r}; expected one of ps-opt, ps-eq, das-opt, das-eq"
            ) from None


ALL_SCHEMES = tuple(SchemeSpec(s, p) for s in Sensing for p in Power)


@dataclass(frozen=True)
class RdPoint:
    D: float
    R: float
    R_stderr: float
    split: ResourceSplit
    rho_eff: float
    operational: bool = True


@dataclass(frozen=True)
class RdCurve:
    config: SystemConfig
    scheme: SchemeSpec
    points: tuple[RdPoint, ...]
    D_min: float
    D_star: float
    D_max: float
    T_tau_star: float | None = None
    extras: dict = field(default_factory=dict, compare=False)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def min_distortion(N: int, M: int, T: float, rho: float) -> float:
    """Smallest distortion reachable with the whole block energy on pilots.

    Shared by both schemes and both power policies; every caller goes through
    this one expression so the values agree bit for bit.
    """
    return N * M * M / (M + rho * T)


def validate_split(config: SystemConfig, split: ResourceSplit) -> bool:
    if split.T_tau < config.M or split.T_tau > config.T:
        return False
    if split.rho_tau < 0 or split.rho_d < 0:
        return False
    budget = config.rho * config.T
    return split.energy(config) <= budget * (1.0 + ENERGY_RTOL)


def effective_snr(rho_tau: float, rho_d: float, T_tau: float, M: int) -> float:
    """Post-estimation SNR seen by the data phase under a pilot-only estimate."""
    if rho_tau == 0 or rho_d == 0:
        return 0.0
    a = rho_tau * T_tau / M
    return rho_d * a / (1.0 + rho_d + a)


def distortion_to_effective_snr(rho_d: float, D: float, N: int, M: int) -> float:
    NM = N * M
    if not 0 < D <= NM * (1 + ENDPOINT_RTOL):
        raise DomainError(f"distortion {D} outside (0, {NM}]")
    D = min(D, NM)
    return rho_d * (NM - D) / (NM + rho_d * D)


def clamp_to_interval(D: float, lo: float, hi: float, what: str) -> float:
    """Snap D onto [lo, hi] if it is within rounding of an endpoint, else raise."""
    slack = ENDPOINT_RTOL * max(abs(lo), abs(hi))
    if D < lo - slack or D > hi + slack:
        raise DomainError(f"{what}: distortion {D} outside [{lo}, {hi}]")
    return min(max(D, lo), hi)
