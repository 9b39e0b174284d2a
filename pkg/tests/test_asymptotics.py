import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isac_rd import asymptotics as asy
from isac_rd.core import DomainError, Power, Sensing, SystemConfig

OPT, EQ = Power.OPTIMAL, Power.EQUAL
PS, DAS = Sensing.PS, Sensing.DAS
Ks = st.floats(1.0001, 1e4)


@pytest.mark.parametrize("T", [13.0, 24.0, 30.0, 100.0])
def test_low_snr_optimal_ratio_is_two(T):
    cfg = SystemConfig(12, 12, T, 0.01)
    ps, das = asy.low_snr_eff_snr(cfg, OPT, 1e-3)
    assert das / ps == pytest.approx(2.0, rel=1e-15)
    assert ps == pytest.approx(T * T * 1e-6 / (4 * 12 * (T - 12)), rel=1e-15)


def test_low_snr_equal_ratio_piecewise():
    r = asy.low_snr_report(SystemConfig(12, 12, 30, 0.01), EQ, 1e-3)
    assert r.gain_ratio == pytest.approx(2.0, rel=1e-15)
    r = asy.low_snr_report(SystemConfig(12, 12, 18, 0.01), EQ, 1e-3)
    assert r.gain_ratio == pytest.approx(18 / 12, rel=1e-15)
    assert r.regime is asy.Regime.LOW


def test_high_snr_examples():
    rho = 1e4
    assert asy.high_snr_eff_snr(OPT, PS, 10, rho) == pytest.approx(
        11 / (1 + math.sqrt(10)) ** 2 * rho, rel=1e-15)
    assert asy.high_snr_eff_snr(OPT, PS, 10, rho) == pytest.approx(6349.4, rel=1e-4)
    assert asy.high_snr_eff_snr(OPT, DAS, 10, rho) == pytest.approx(9900, rel=1e-15)
    for K in (1.5, 3, 100):
        assert asy.high_snr_eff_snr(EQ, PS, K, rho) == rho / 2
    assert asy.high_snr_eff_snr(EQ, DAS, 10, 1.0) == pytest.approx(2 / (2 + math.sqrt(104) - 10))


def test_gain_ratio_examples():
    assert asy.high_snr_gain_ratio(EQ, 2) == pytest.approx(4 / math.sqrt(8), rel=1e-15)
    assert asy.high_snr_gain_ratio(OPT, 4) == pytest.approx(1.6875, rel=1e-15)
    # DAS-eq -> rho while PS-eq stays at rho/2, so the equal-power ratio tends to 2
    assert asy.high_snr_gain_ratio(EQ, 1e8) == pytest.approx(2.0, rel=1e-7)
    assert asy.high_snr_gain_ratio(EQ, 1e8) == pytest.approx(
        asy.high_snr_eff_snr(EQ, DAS, 1e8, 1.0) / asy.high_snr_eff_snr(EQ, PS, 1e8, 1.0), rel=1e-15)


def test_k_domain():
    for K in (1.0, 0.5):
        with pytest.raises(DomainError):
            asy.high_snr_eff_snr(OPT, PS, K, 1.0)
        with pytest.raises(DomainError):
            asy.high_snr_gain_ratio(EQ, K)


def test_das_opt_branches_meet_at_two():
    lo = asy.high_snr_eff_snr(OPT, DAS, 2 - 1e-12, 1.0)
    at = asy.high_snr_eff_snr(OPT, DAS, 2, 1.0)
    assert at == 0.75 and lo == pytest.approx(0.75, abs=1e-12)


@given(K=Ks)
def test_table_values_in_budget(K):
    for p in (OPT, EQ):
        for s in (PS, DAS):
            v = asy.high_snr_eff_snr(p, s, K, 1.0)
            assert 0 < v <= 1
        r = asy.high_snr_report(p, K, 1.0)
        assert r.gain_ratio > 1
        assert r.gain_ratio == pytest.approx(asy.high_snr_gain_ratio(p, K), rel=1e-12)


def test_exact_pipeline_high_snr():
    rho, K = 1e4, 10
    das_eq = asy.exact_high_snr_eff_snr(EQ, DAS, K, rho)
    assert das_eq == pytest.approx(asy.high_snr_eff_snr(EQ, DAS, K, rho), rel=0.01)
    das_opt = asy.exact_high_snr_eff_snr(OPT, DAS, K, rho)
    assert das_opt >= 0.99 * asy.high_snr_eff_snr(OPT, DAS, K, rho)
    ps_opt = asy.exact_high_snr_eff_snr(OPT, PS, K, rho)
    assert ps_opt == pytest.approx(asy.high_snr_eff_snr(OPT, PS, K, rho), rel=0.01)
    assert asy.exact_high_snr_eff_snr(EQ, PS, K, rho) == pytest.approx(rho / 2, rel=0.01)


def test_low_snr_limit_trace(default_config):
    tr = asy.verify_low_snr_limit(default_config, [1e-2, 1e-4])
    assert tr.limit == 2.0
    assert 1.98 <= tr.ratio[1] <= 2.02
    assert abs(tr.ratio[0] - 2) > abs(tr.ratio[1] - 2)
    eq = asy.verify_low_snr_limit(default_config, [1e-4], EQ)
    assert eq.ratio[0] == pytest.approx(2.0, rel=0.01)
    with pytest.raises(DomainError):
        asy.verify_low_snr_limit(default_config, [0.5])


def test_convergence_examples():
    rep = asy.verify_high_snr_convergence([10, 100])
    assert rep.das_gap[0] == pytest.approx(0.01, rel=1e-12)
    assert rep.ps_gap[1] == pytest.approx(1 - 101 / 121, rel=1e-12)
    assert rep.ps_gap[1] == pytest.approx(0.1653, abs=1e-4)
    # DAS gap is the smallest at every K >= 2
    assert all(d < p for d, p in zip(rep.das_gap, rep.ps_gap))
    with pytest.raises(DomainError):
        asy.verify_high_snr_convergence([1.5, 4])


@given(K=st.floats(2, 1e6))
def test_gap_forms_match_table(K):
    rep = asy.verify_high_snr_convergence([K, 2 * K])
    assert rep.das_gap[0] == pytest.approx(1 - asy.high_snr_eff_snr(OPT, DAS, K, 1.0),
                                           rel=1e-6)
    assert rep.ps_gap[0] == pytest.approx(1 - asy.high_snr_eff_snr(OPT, PS, K, 1.0), rel=1e-9)


def test_das_slope():
    rep = asy.verify_high_snr_convergence([4, 16, 64, 256])
    assert rep.das_slope == pytest.approx(-2.0, abs=1e-12)


def test_ps_gap_tends_to_inverse_sqrt():
    # 2 sqrt(K) / (1 + sqrt(K))^2 ~ 2 / sqrt(K): the local slope approaches -1/2 only for large K
    rep = asy.verify_high_snr_convergence([1e8, 1e10])
    assert rep.ps_slope == pytest.approx(-0.5, abs=1e-3)


def test_regime_of():
    assert asy.regime_of(-20) == "low" and asy.regime_of(30) == "high"
    assert asy.regime_of(5) == "mid"


def test_mapped_snr_perfect_csi():
    assert asy._mapped(3.0, 0.0) == 3.0
    assert asy._mapped(3.0, 1.0) == 0.0
    assert np.isclose(asy.ps_mapped_eff_snr(1e9, 2.0, 1, 1), 2.0)
