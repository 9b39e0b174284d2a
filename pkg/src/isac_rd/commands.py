"""Batch jobs behind the CLI subcommands.

Each job writes its CSVs plus a JSON manifest into ``out`` and returns the
manifest. ``manifest.checks`` records the internal assertions; the CLI exits
non-zero when any of them fails.
"""
from __future__ import annotations

import time
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import das_sensing as das
from .core import (
    ENERGY_RTOL,
    Power,
    SchemeSpec,
    Sensing,
    SystemConfig,
    db_to_linear,
    linear_to_db,
)
from .frontier import CurveRequest, rd_curve
from .montecarlo import McConfig, empirical_das_mse
from .outputs import RunManifest, write_csv

DEFAULT_RMT_M = (8, 16, 32)
DEFAULT_RHO_D_DB = tuple(range(-10, 21, 5))
DEFAULT_K = (1.5, 2.0, 4.0, 10.0, 16.0, 64.0, 256.0)
DEFAULT_RHO_DB = (-40.0, -30.0, -20.0, 30.0, 40.0)


def _finish(manifest: RunManifest, out: Path, started: float, name: str) -> RunManifest:
    manifest.tool_version = __version__
    manifest.wall_time = time.perf_counter() - started
    manifest.write(out / name)
    return manifest


def cmd_validate_rmt(gamma: float, c: float, M_list: Sequence[int],
                     rho_d_grid_db: Sequence[float], mc: McConfig, out: Path,
                     N_list: Sequence[int] | None = None) -> RunManifest:
    """Empirical DAS sensing MSE against the large-system value and the Jensen bound."""
    started = time.perf_counter()
    if not gamma > 0 or c < 1:
        raise ValueError(f"need gamma > 0 and c >= 1, got gamma={gamma}, c={c}")
    out = Path(out)
    N_list = list(N_list) if N_list else list(M_list)
    rows = []
    ordered = True
    for M, N in zip(M_list, N_list):
        T_d = round(M / gamma)
        if T_d < 1:
            raise ValueError(f"M={M}, gamma={gamma} gives no data symbols")
        for rho_d_db in rho_d_grid_db:
            rho_d = db_to_linear(rho_d_db)
            est = empirical_das_mse(N, M, c, rho_d, T_d, mc)
            rmt = das.rmt_mse(N, M, c, rho_d, T_d)
            jensen = das.matched_jensen(N, M, c, rho_d, T_d)
            ordered &= jensen < rmt
            rows.append((M, float(rho_d_db), est.mean, est.stderr, rmt, jensen))
    path = write_csv(out / "validate_rmt.csv",
                     ("M", "rho_d_db", "mc_mean", "mc_stderr", "rmt", "jensen"), rows)
    manifest = RunManifest(
        command="validate-rmt", config=None, mc=mc, output_paths=[str(path)],
        parameters={"gamma": gamma, "c": c, "M": list(M_list), "N": N_list,
                    "rho_d_db": [float(x) for x in rho_d_grid_db]},
        checks={"jensen_below_rmt": bool(ordered)})
    return _finish(manifest, out, started, "validate_rmt_manifest.json")


CURVE_HEADER = ("D", "D_normalized", "R", "R_stderr", "T_tau", "rho_tau", "rho_d", "rho_eff")


def cmd_rd_curve(config: SystemConfig, schemes: Sequence[SchemeSpec], grid: int,
                 mc: McConfig, out: Path, extend: bool = False) -> RunManifest:
    """One rate-distortion CSV per scheme."""
    started = time.perf_counter()
    out = Path(out)
    paths, summary = [], {}
    energy_ok = True
    budget = config.rho * config.T
    for scheme in schemes:
        curve = rd_curve(CurveRequest(config, scheme, grid, mc, extend=extend))
        header = CURVE_HEADER + (("operational",) if extend else ())
        rows = []
        for p in curve.points:
            s = p.split
            if s.rho_tau == s.rho_d == config.rho:
                # equal power spends rho per symbol by construction
                saturated = True
            else:
                saturated = abs(s.energy(config) - budget) <= ENERGY_RTOL * budget
            energy_ok &= saturated
            row = [p.D, p.D / config.NM, p.R, p.R_stderr, s.T_tau, s.rho_tau, s.rho_d, p.rho_eff]
            if extend:
                row.append(p.operational)
            rows.append(row)
        paths.append(str(write_csv(out / f"rd_{scheme.slug}.csv", header, rows)))
        best = max(curve.points, key=lambda p: p.R)
        summary[scheme.slug] = {
            "D_min": curve.D_min, "D_star": curve.D_star, "D_max": curve.D_max,
            "T_tau_star": curve.T_tau_star, "R_max": best.R, "R_max_stderr": best.R_stderr,
        }
    manifest = RunManifest(
        command="rd-curve", config=config, mc=mc, output_paths=paths,
        parameters={"schemes": [s.slug for s in schemes], "grid": grid, "extend": extend,
                    "snr_db": linear_to_db(config.rho), "domains": summary},
        checks={"energy_saturated": bool(energy_ok)})
    return _finish(manifest, out, started, "rd_curve_manifest.json")


TABLE_HEADER = ("K", "rho_db", "regime", "ps_opt", "das_opt", "ps_eq", "das_eq",
                "gain_opt", "gain_eq", "exact_ps_opt", "exact_das_opt", "exact_ps_eq",
                "exact_das_eq")


def cmd_asymptotics(K_grid: Sequence[float], rho_db_grid: Sequence[float], out: Path,
                    config: SystemConfig | None = None) -> RunManifest:
    """Closed-form high-SNR table, low-SNR ratio trace and convergence fit."""
    started = time.perf_counter()
    out = Path(out)
    config = config or SystemConfig(M=12, N=12, T=30, rho=db_to_linear(5.0))
    for K in K_grid:
        if not K > 1:
            raise asy.DomainError(f"K must exceed 1, got {K}")
    rows = []
    gains_ok = True
    for K in K_grid:
        for rho_db in rho_db_grid:
            rho = db_to_linear(rho_db)
            closed = [asy.high_snr_eff_snr(p, s, K, rho)
                      for p in (Power.OPTIMAL, Power.EQUAL) for s in (Sensing.PS, Sensing.DAS)]
            exact = [asy.exact_high_snr_eff_snr(p, s, K, rho)
                     for p in (Power.OPTIMAL, Power.EQUAL) for s in (Sensing.PS, Sensing.DAS)]
            g_opt = asy.high_snr_gain_ratio(Power.OPTIMAL, K)
            g_eq = asy.high_snr_gain_ratio(Power.EQUAL, K)
            gains_ok &= g_opt > 1 and g_eq > 1
            rows.append([float(K), float(rho_db), asy.regime_of(rho_db), *closed,
                         g_opt, g_eq, *exact])
    paths = [str(write_csv(out / "table_i.csv", TABLE_HEADER, rows))]

    low_db = [float(x) for x in rho_db_grid if db_to_linear(x) <= 0.1]
    low = [db_to_linear(x) for x in low_db]
    low_rows = []
    if low:
        traces = {p: asy.verify_low_snr_limit(config, low, p) for p in Power}
        for i, rho in enumerate(low):
            low_rows.append([low_db[i], rho,
                             traces[Power.OPTIMAL].ratio[i], traces[Power.OPTIMAL].limit,
                             traces[Power.EQUAL].ratio[i], traces[Power.EQUAL].limit])
    paths.append(str(write_csv(out / "low_snr.csv",
                               ("rho_db", "rho", "ratio_opt", "limit_opt", "ratio_eq", "limit_eq"),
                               low_rows)))

    fit_K = sorted(k for k in K_grid if k >= 2)
    fit = None
    if len(fit_K) >= 2:
        conv = asy.verify_high_snr_convergence(fit_K)
        paths.append(str(write_csv(out / "convergence.csv", ("K", "das_opt_gap", "ps_opt_gap"),
                                   zip(conv.K, conv.das_gap, conv.ps_gap))))
        fit = {"das_slope": conv.das_slope, "ps_slope": conv.ps_slope, "K": list(conv.K)}
    manifest = RunManifest(
        command="asymptotics", config=config, mc=None, output_paths=paths,
        parameters={"K": [float(k) for k in K_grid], "rho_db": [float(x) for x in rho_db_grid],
                    "convergence_fit": fit},
        checks={"gain_ratios_above_one": bool(gains_ok),
                "table_finite": bool(np.all(np.isfinite([r[3:7] for r in rows])))})
    return _finish(manifest, out, started, "asymptotics_manifest.json")


def all_checks_pass(manifest: RunManifest) -> bool:
    return all(manifest.checks.values()) and all(Path(p).exists() for p in manifest.output_paths)
