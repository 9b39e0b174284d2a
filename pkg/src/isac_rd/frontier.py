"""Rate-distortion curves for the four sensing scheme / power policy pairs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import das_sensing as das
from . import pilot_sensing as ps
from .core import (
    InvalidSplitError,
    Power,
    RdCurve,
    RdPoint,
    ResourceSplit,
    SchemeSpec,
    Sensing,
    SystemConfig,
    effective_snr,
    validate_split,
)
from .montecarlo import McConfig, McEstimate, ergodic_rate
from .search import golden_section_max

__all__ = [
    "CurveRequest",
    "SchemeDomain",
    "distortion_grid",
    "golden_section_max",
    "rate_at_distortion",
    "rate_at_split",
    "rd_curve",
    "scheme_domain",
    "scheme_split",
]

GRID_EPS_REL = 1e-6


@dataclass(frozen=True)
class CurveRequest:
    config: SystemConfig
    scheme: SchemeSpec
    grid_points: int = 20
    mc: McConfig = McConfig()
    # carry the curve on to D_max, flagging points past D_star as non-operational
    extend: bool = False
    distortions: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")


@dataclass(frozen=True)
class SchemeDomain:
    D_min: float
    D_star: float
    D_max: float
    T_tau_star: float | None = None


def scheme_domain(config: SystemConfig, scheme: SchemeSpec, mc: McConfig) -> SchemeDomain:
    config.require_data_phase()
    if scheme.sensing is Sensing.PS:
        if scheme.power is Power.OPTIMAL:
            d = ps.ps_opt_domain(config)
            return SchemeDomain(d.D_min, d.D_star, float(config.NM), float(config.M))
        d = ps.ps_eq_domain(config, mc)
        return SchemeDomain(d.D_min, d.D_star, d.D_max, d.T_tau_star)
    if scheme.power is Power.OPTIMAL:
        d = das.das_opt_domain(config)
        return SchemeDomain(d.D_min, d.D_star, d.D_max, float(config.M))
    d = das.das_eq_domain(config, mc)
    return SchemeDomain(d.D_min, d.D_star, d.D_max, d.T_tau_star)


def scheme_split(config: SystemConfig, scheme: SchemeSpec, D: float) -> ResourceSplit:
    if scheme.sensing is Sensing.PS:
        if scheme.power is Power.OPTIMAL:
            return ps.ps_opt_power_split(config, D)
        return ps.ps_eq_split(config, D)
    if scheme.power is Power.OPTIMAL:
        return das.das_opt_split(config, D)
    return das.das_eq_split(config, D)


def distortion_grid(D_min: float, D_hi: float, n: int, scale: float) -> np.ndarray:
    """Geometric grid in (D - D_min + eps), eps = 1e-6 * scale, endpoints exact."""
    eps = GRID_EPS_REL * scale
    offsets = np.geomspace(eps, D_hi - D_min + eps, n)
    grid = D_min - eps + offsets
    grid[0], grid[-1] = D_min, D_hi
    return grid


def rate_at_split(config: SystemConfig, split: ResourceSplit, mc: McConfig) -> McEstimate:
    if not validate_split(config, split):
        raise InvalidSplitError(f"{split} violates the constraints of {config}")
    rho_eff = effective_snr(split.rho_tau, split.rho_d, split.T_tau, config.M)
    frac = (config.T - split.T_tau) / config.T
    return ergodic_rate(rho_eff, config.M, config.N, frac, mc)


def _point(config: SystemConfig, scheme: SchemeSpec, D: float, mc: McConfig,
           operational: bool = True) -> RdPoint:
    split = scheme_split(config, scheme, D)
    est = rate_at_split(config, split, mc)
    rho_eff = effective_snr(split.rho_tau, split.rho_d, split.T_tau, config.M)
    return RdPoint(D=float(D), R=est.mean, R_stderr=est.stderr, split=split,
                   rho_eff=rho_eff, operational=operational)


def rate_at_distortion(config: SystemConfig, scheme: SchemeSpec, D: float, mc: McConfig,
                       domain: SchemeDomain | None = None) -> RdPoint:
    """R(D) for one distortion target.

    Targets looser than D_star are served at D_star, where the distortion
    constraint stops binding.
    """
    domain = domain or scheme_domain(config, scheme, mc)
    return _point(config, scheme, min(D, domain.D_star), mc)


def rd_curve(request: CurveRequest) -> RdCurve:
    config, scheme, mc = request.config, request.scheme, request.mc
    config.require_data_phase()
    dom = scheme_domain(config, scheme, mc)
    if request.distortions is not None:
        grid = np.asarray(sorted(set(request.distortions)), dtype=float)
        points = [rate_at_distortion(config, scheme, D, mc, dom) for D in grid]
        # keep the requested D on each point even when served at D_star
        points = [RdPoint(D=float(D), R=p.R, R_stderr=p.R_stderr, split=p.split,
                          rho_eff=p.rho_eff, operational=D <= dom.D_star)
                  for D, p in zip(grid, points)]
    else:
        grid = distortion_grid(dom.D_min, dom.D_star, request.grid_points, config.NM)
        points = [_point(config, scheme, D, mc) for D in grid]
        if request.extend and dom.D_max > dom.D_star:
            tail = np.linspace(dom.D_star, dom.D_max, request.grid_points)[1:]
            points += [_point(config, scheme, D, mc, operational=False) for D in tail]
    return RdCurve(config=config, scheme=scheme, points=tuple(points),
                   D_min=dom.D_min, D_star=dom.D_star, D_max=dom.D_max,
                   T_tau_star=dom.T_tau_star)


def shared_distortions(curves: Sequence[RdCurve], n: int) -> tuple[float, ...]:
    """Common grid over the intersection of several curves' effective domains."""
    lo = max(c.D_min for c in curves)
    hi = min(c.D_star for c in curves)
    if not hi > lo or math.isclose(hi, lo):
        raise ValueError("effective domains do not overlap")
    return tuple(distortion_grid(lo, hi, n, curves[0].config.NM))
