import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nswave.errors import ConfigurationError, DomainError
from nswave.euler_waves import (
    WaveConfig,
    exact_rarefaction,
    r1_connect,
    riemann_intermediate,
    s2_connect,
    shock_speed,
)
from nswave.thermo import GasParams, eigenvalues, lambda1_inverse, rarefaction_potential, riemann_invariant_z1

SIGMA = 1.38550425194882336584561657696   # mpmath, 30 digits
U_M = 0.138550425194882336584561657696
U_MINUS = -0.0220744961797517535494005655306  # closed form and quadrature of lambda_1 agree
DELTA_S = 0.191962203216826861555472573377

G53 = GasParams(5.0 / 3.0)


def test_shock_speed_reference():
    s = shock_speed(0.9, 1.0, G53)
    assert s == pytest.approx(SIGMA, rel=1e-14)
    assert eigenvalues(1.0, G53)[1] < s < eigenvalues(0.9, G53)[1]


def test_shock_speed_degenerate_limit():
    s = shock_speed(1.0 - 1e-6, 1.0, G53)
    assert s == pytest.approx(eigenvalues(1.0, G53)[1], abs=1e-4)


@pytest.mark.parametrize("v_m, v_plus", [(1.0, 1.0), (1.1, 1.0), (-0.1, 1.0)])
def test_shock_speed_rejects_non_shock(v_m, v_plus):
    with pytest.raises(ConfigurationError):
        shock_speed(v_m, v_plus, G53)


def test_s2_connect(cfg):
    assert s2_connect(1.0, 0.0, 0.9, G53) == pytest.approx(U_M, rel=1e-14)
    assert s2_connect(1.0, 0.3, 1.0, G53) == 0.3
    r1, r2 = cfg.rh_residuals()
    assert abs(r1) < 1e-12 and abs(r2) < 1e-12


def test_r1_connect():
    u = r1_connect(0.9, U_M, 0.8, G53)
    assert u == pytest.approx(U_MINUS, rel=1e-12)
    assert r1_connect(0.9, U_M, 0.9, G53) == U_M
    assert abs(riemann_invariant_z1(0.8, u, G53) - riemann_invariant_z1(0.9, U_M, G53)) < 1e-12
    with pytest.raises(ConfigurationError):
        r1_connect(0.9, U_M, 0.95, G53)


def test_wave_config_baseline(cfg):
    assert cfg.sigma == pytest.approx(SIGMA, rel=1e-14)
    assert cfg.u_minus == pytest.approx(U_MINUS, rel=1e-12)
    assert cfg.delta_S == pytest.approx(DELTA_S, rel=1e-14)
    assert cfg.delta_R == pytest.approx(0.1, rel=1e-14)
    assert cfg.lax_holds()


def test_wave_config_rejects_bad_ordering_and_strength():
    with pytest.raises(ConfigurationError, match="v_minus < v_m < v_plus"):
        WaveConfig.from_states(5 / 3, 1.0, 0.0, 1.1, 0.8)
    with pytest.raises(ConfigurationError, match="cap"):
        WaveConfig.from_states(5 / 3, 1.0, 0.0, 0.6, 0.5)


def test_exact_rarefaction_states(cfg):
    t = 2.0
    w_minus = eigenvalues(cfg.v_minus, G53)[0]
    w_m = eigenvalues(cfg.v_m, G53)[0]
    v, u = exact_rarefaction(t, np.array([(w_minus - 0.1) * t, (w_m + 0.1) * t]), cfg)
    assert v.tolist() == [cfg.v_minus, cfg.v_m]
    assert u.tolist() == [cfg.u_minus, cfg.u_m]
    with pytest.raises(DomainError):
        exact_rarefaction(0.0, 0.0, cfg)


def test_exact_rarefaction_inside_fan(cfg):
    t = 3.0
    x = eigenvalues(0.85, G53)[0] * t
    v, u = exact_rarefaction(t, x, cfg)
    assert v == pytest.approx(0.85, rel=1e-13)
    expected_u = cfg.u_m + rarefaction_potential(cfg.v_m, G53) - rarefaction_potential(0.85, G53)
    assert u == pytest.approx(expected_u, rel=1e-12)


def test_exact_rarefaction_continuous_at_edges(cfg):
    t = 1.0
    for edge in (eigenvalues(cfg.v_minus, G53)[0], eigenvalues(cfg.v_m, G53)[0]):
        x = np.array([edge * t - 1e-12, edge * t + 1e-12])
        v, u = exact_rarefaction(t, x, cfg)
        assert abs(v[1] - v[0]) < 1e-10 and abs(u[1] - u[0]) < 1e-10


def test_riemann_intermediate_roundtrip_baseline(cfg):
    v_m, u_m = riemann_intermediate(cfg.v_minus, cfg.u_minus, cfg.v_plus, cfg.u_plus, G53)
    assert v_m == pytest.approx(0.9, abs=1e-9)
    assert u_m == pytest.approx(cfg.u_m, abs=1e-9)


def test_riemann_intermediate_degenerate(cfg):
    v_m, u_m = riemann_intermediate(cfg.v_m, cfg.u_m, cfg.v_plus, cfg.u_plus, G53)
    assert v_m == pytest.approx(cfg.v_m, abs=1e-10)
    v_m, u_m = riemann_intermediate(0.8, 0.1, 0.8, 0.1, G53)
    assert (v_m, u_m) == (0.8, 0.1)


def test_riemann_intermediate_names_failing_curve():
    # strong compression from the left needs a 1-shock, strong expansion a 2-rarefaction
    with pytest.raises(ConfigurationError, match="S1"):
        riemann_intermediate(0.8, 2.0, 1.0, 0.0, G53)
    with pytest.raises(ConfigurationError, match="R2"):
        riemann_intermediate(0.8, -1.0, 1.0, 0.0, G53)


@given(
    gamma=st.floats(1.2, 3.0),
    v_plus=st.floats(0.5, 2.0),
    s_frac=st.floats(0.01, 0.2),
    r_frac=st.floats(0.01, 0.2),
)
def test_riemann_roundtrip_random(gamma, v_plus, s_frac, r_frac):
    g = GasParams(gamma)
    v_m = v_plus * (1 - s_frac)
    v_minus = v_m * (1 - r_frac)
    cfg = WaveConfig.from_states(gamma, v_plus, 0.0, v_m, v_minus, strength_cap=10.0)
    assert cfg.lax_holds()
    v_rec, _ = riemann_intermediate(cfg.v_minus, cfg.u_minus, cfg.v_plus, cfg.u_plus, g)
    assert v_rec == pytest.approx(v_m, abs=1e-8)
