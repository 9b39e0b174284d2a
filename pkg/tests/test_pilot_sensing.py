import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isac_rd import pilot_sensing as ps
from isac_rd.core import (
    DomainError,
    InfeasibleDistortionError,
    SystemConfig,
    distortion_to_effective_snr,
    effective_snr,
)
from isac_rd.montecarlo import McConfig, ergodic_rate
from isac_rd.search import equal_power_rate

# bounded scalar search (scipy) over the closed-form effective SNR
D_STAR_OPT_REF = 31.256589888908090


def test_mse_pilot_optimal_examples():
    assert ps.mse_pilot_optimal(12, 12, 0.0, 12) == 144
    assert ps.mse_pilot_optimal(1, 1, 1.0, 1) == 0.5
    assert ps.mse_pilot_optimal(12, 12, 10 ** 0.5, 12) == pytest.approx(34.596442562694065,
                                                                          rel=1e-12)
    with pytest.raises(DomainError):
        ps.mse_pilot_optimal(2, 2, 1.0, 1.5)


def test_opt_power_split(small_config):
    s = ps.ps_opt_power_split(small_config, 2.0)
    assert (s.T_tau, s.rho_tau, s.rho_d) == (2, 1.0, 1.0)
    assert s.energy(small_config) == pytest.approx(10.0, rel=1e-15)


def test_opt_power_split_endpoints(default_config):
    cfg = default_config
    d = ps.ps_opt_domain(cfg)
    assert ps.ps_opt_power_split(cfg, d.D_min).rho_d == 0
    top = ps.ps_opt_power_split(cfg, cfg.NM)
    assert top.rho_tau == 0
    assert top.rho_d == pytest.approx(cfg.rho * cfg.T / (cfg.T - cfg.M), rel=1e-15)
    with pytest.raises(InfeasibleDistortionError):
        ps.ps_opt_power_split(cfg, d.D_min * 0.999)


def test_opt_rho_eff_examples(small_config, default_config):
    assert ps.ps_opt_rho_eff(small_config, 2.0) == pytest.approx(1 / 3, rel=1e-12)
    d = ps.ps_opt_domain(default_config)
    assert ps.ps_opt_rho_eff(default_config, d.D_min) == pytest.approx(0, abs=1e-15)
    assert ps.ps_opt_rho_eff(default_config, default_config.NM) == 0
    with pytest.raises(DomainError):
        ps.ps_opt_rho_eff(default_config, d.D_min * 0.99)


@pytest.mark.parametrize("frac", np.linspace(0, 1, 11))
def test_opt_rho_eff_matches_split(default_config, frac):
    d = ps.ps_opt_domain(default_config)
    D = d.D_min + frac * (default_config.NM - d.D_min)
    s = ps.ps_opt_power_split(default_config, D)
    ref = effective_snr(s.rho_tau, s.rho_d, s.T_tau, default_config.M)
    assert ps.ps_opt_rho_eff(default_config, D) == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_opt_domain(default_config):
    d = ps.ps_opt_domain(default_config)
    assert d.D_min == pytest.approx(1728 / 106.86832980505137, rel=1e-14)
    assert d.D_min == pytest.approx(16.169430205863684, rel=1e-14)
    assert d.D_star == pytest.approx(D_STAR_OPT_REF, rel=1e-8)
    eps = 1e-6 * d.D_star
    f = lambda D: ps.ps_opt_rho_eff(default_config, D)
    assert f(d.D_star) >= f(d.D_star - eps)
    assert f(d.D_star) >= f(d.D_star + eps)


def test_opt_domain_high_snr_limit():
    Dmins = [ps.ps_opt_domain(SystemConfig(4, 4, 20, rho)).D_min for rho in (1e2, 1e4, 1e6)]
    assert Dmins[0] > Dmins[1] > Dmins[2]
    assert Dmins[2] < 1e-4


def test_eq_T_tau_examples(small_config):
    cfg = small_config
    lo, hi = ps.ps_eq_bounds(cfg)
    assert ps.ps_eq_T_tau_of_D(cfg, hi) == pytest.approx(cfg.M, rel=1e-14)
    assert ps.ps_eq_T_tau_of_D(cfg, lo) == pytest.approx(cfg.T, rel=1e-14)
    assert ps.ps_eq_T_tau_of_D(cfg, 1.0) == 6.0
    assert ps.mse_pilot_optimal(2, 2, 1.0, 6.0) == 1.0
    with pytest.raises(DomainError):
        ps.ps_eq_T_tau_of_D(cfg, hi * 1.01)


def test_eq_rho_eff_examples(small_config):
    assert ps.ps_eq_rho_eff(small_config, 1.0) == pytest.approx(0.6, rel=1e-15)
    cfg = SystemConfig(2, 2, 10, 1.0)
    lo, hi = ps.ps_eq_bounds(cfg)
    for D in np.linspace(lo, hi, 9):
        assert ps.ps_eq_rho_eff(cfg, D) == distortion_to_effective_snr(1.0, D, 2, 2)


configs = st.builds(
    lambda M, N, extra, rho: SystemConfig(M, N, M + extra, rho),
    st.integers(1, 16), st.integers(1, 16), st.floats(0.5, 100), st.floats(1e-2, 1e3))


@given(cfg=configs, frac=st.floats(0, 1))
def test_eq_round_trip(cfg, frac):
    lo, hi = ps.ps_eq_bounds(cfg)
    D = lo + frac * (hi - lo)
    T_tau = ps.ps_eq_T_tau_of_D(cfg, D)
    assert cfg.M <= T_tau <= cfg.T
    assert ps.mse_pilot_optimal(cfg.N, cfg.M, cfg.rho, T_tau) == pytest.approx(D, rel=1e-10)


@given(cfg=configs)
def test_eq_rho_eff_strictly_decreasing(cfg):
    lo, hi = ps.ps_eq_bounds(cfg)
    vals = [ps.ps_eq_rho_eff(cfg, D) for D in np.linspace(lo, hi, 40)]
    assert np.all(np.diff(vals) < 0)


@given(cfg=configs)
@settings(max_examples=50)
def test_opt_rho_eff_shape(cfg):
    d = ps.ps_opt_domain(cfg)
    assert 0 < d.D_min < d.D_star < cfg.NM
    up = np.linspace(d.D_min, d.D_star, 200)
    down = np.linspace(d.D_star, cfg.NM, 200)
    f_up = np.array([ps.ps_opt_rho_eff(cfg, D) for D in up])
    f_down = np.array([ps.ps_opt_rho_eff(cfg, D) for D in down])
    assert np.all(np.diff(f_up) > 0)
    assert np.all(np.diff(f_down) < 0)
    assert np.all(f_up[:-2] - 2 * f_up[1:-1] + f_up[2:] <= 1e-9)


def test_eq_domain(default_config):
    mc = McConfig(trials=1000, seed=3)
    d = ps.ps_eq_domain(default_config, mc)
    assert d.D_max == default_config.NM / (1 + default_config.rho)
    assert d.D_min == default_config.NM * 12 / (12 + default_config.rho * 30)
    assert d.D_min < d.D_star <= d.D_max


def test_eq_domain_grid_dominance(default_config):
    mc = McConfig(trials=3000, seed=11)
    d = ps.ps_eq_domain(default_config, mc)
    rate = lambda D: equal_power_rate(default_config, ps.ps_eq_T_tau_of_D(default_config, D), mc)
    best = rate(d.D_star)
    se = ergodic_rate(effective_snr(default_config.rho, default_config.rho, d.T_tau_star, 12),
                      12, 12, (30 - d.T_tau_star) / 30, mc).stderr
    for D in np.linspace(d.D_min, d.D_max, 50):
        assert best >= rate(D) - 2 * se
