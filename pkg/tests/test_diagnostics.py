import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nswave.diagnostics import (
    DiagnosticRecord,
    background_h,
    ddx,
    effective_velocity,
    poincare_check,
    quadratic_identity_residual,
    stability_functionals,
    sup_distance_to_exact,
    trapezoid,
    wave_error_terms,
    wave_interaction_norms,
    weighted_relative_entropy,
)
from nswave.errors import DomainError
from nswave.euler_waves import WaveConfig, exact_rarefaction
from nswave.profiles import (
    ApproxRarefaction,
    WeightFunction,
    composite_wave,
    solve_shock_profile,
    weight_a,
)

XI = np.linspace(-250.0, 120.0, 14801)
DXI = XI[1] - XI[0]

# baseline background at t = 0, X = 0 on XI, frozen from the first build
INTERACTION_T0 = {
    "shockx_rare_L1": 0.004299780475134811,
    "rarex_shockx_L1": 0.00044970317055957165,
    "shockx_rare_L2": 0.0010567481364457754,
    "rarex_shockx_L2": 0.00024865895561180796,
    "rarex_shock_L2": 0.002371099097808031,
}


class Waves:
    def __init__(self, v_m, v_minus, gamma=5.0 / 3.0):
        self.cfg = WaveConfig.from_states(gamma, 1.0, 0.0, v_m, v_minus)
        self.profile = solve_shock_profile(self.cfg)
        self.rare = ApproxRarefaction.from_config(self.cfg)
        lam = math.sqrt(self.cfg.delta_S) if self.cfg.delta_S > 0 else 0.0
        self.weight = WeightFunction(lam, self.profile)

    def bg(self, t=0.0, X=0.0, xi=XI):
        return composite_wave(t, xi, X, self.profile, self.rare)

    def went(self, v, u, t=0.0, X=0.0):
        bg = self.bg(t, X)
        h = effective_velocity(v, u, DXI)
        hbar = background_h(bg, self.cfg.u_m, DXI)
        a = weight_a(XI - X, self.weight)[0]
        return weighted_relative_entropy(v, h, bg.v, hbar, a, DXI, self.cfg.gas)

    def functionals(self, v, u, t=0.0, X=0.0):
        bg = self.bg(t, X)
        h = effective_velocity(v, u, DXI)
        hbar = background_h(bg, self.cfg.u_m, DXI)
        return stability_functionals(v, u, h, bg, hbar, self.weight.lam, self.cfg, DXI)


@pytest.fixture(scope="module")
def shock_only():
    return Waves(0.9, 0.9)


@pytest.fixture(scope="module")
def baseline():
    return Waves(0.9, 0.8)


@pytest.fixture(scope="module")
def rare_only():
    return Waves(1.0, 0.9)


def gauss(xi, amp, center, width):
    return amp * np.exp(-(((xi - center) / width) ** 2))


# -- effective velocity -------------------------------------------------------

def test_effective_velocity_constant_volume():
    u = np.sin(XI / 10)
    # the one-sided edge stencil leaves rounding-level residue
    assert np.max(np.abs(effective_velocity(np.full_like(XI, 0.9), u, DXI) - u)) < 1e-14


@pytest.mark.parametrize("alpha", [-0.3, 0.01, 0.2])
def test_effective_velocity_exponential_volume(alpha):
    xi = np.linspace(-5, 5, 201)
    h = effective_velocity(np.exp(alpha * xi), np.zeros_like(xi), xi[1] - xi[0])
    assert np.max(np.abs(h + alpha)) < 1e-12


def test_effective_velocity_roundtrip():
    v = 1.0 + 0.1 * np.sin(XI / 7)
    u = np.cos(XI / 5)
    h = effective_velocity(v, u, DXI)
    assert np.max(np.abs(h + ddx(np.log(v), DXI) - u)) < 1e-12
    with pytest.raises(DomainError):
        effective_velocity(-v, u, DXI)


# -- weighted relative entropy ------------------------------------------------

def test_went_vanishes_for_unperturbed_shock(shock_only):
    bg = shock_only.bg()
    # v_R + v_S - v_m equals v_S only up to rounding
    assert shock_only.went(bg.v, bg.u) < 1e-25


def test_went_of_unperturbed_composite_is_background_defect(baseline):
    bg = baseline.bg()
    defect = ddx(np.log(bg.v), DXI) - ddx(np.log(bg.vS), DXI)
    a = weight_a(XI, baseline.weight)[0]
    expected = trapezoid(a * 0.5 * defect ** 2, DXI)
    assert baseline.went(bg.v, bg.u) == pytest.approx(expected, rel=1e-12)
    assert expected > 0.0


def test_went_gaussian_u_bump_far_from_shock(shock_only):
    eps, w = 0.01, 5.0
    bg = shock_only.bg()
    got = shock_only.went(bg.v, bg.u + gauss(XI, eps, -150.0, w))
    assert got == pytest.approx(eps ** 2 * w * math.sqrt(math.pi / 2) / 2, rel=1e-6)


@pytest.mark.parametrize("center", [-10.0, 0.0, 10.0])
def test_went_quadratic_scaling(shock_only, center):
    bg = shock_only.bg()
    def went(eps):
        return shock_only.went(bg.v + gauss(XI, eps, center, 5.0), bg.u + gauss(XI, eps, center + 2, 4.0))
    assert went(2e-3) / went(1e-3) == pytest.approx(4.0, rel=0.01)


# -- good terms ---------------------------------------------------------------

def test_functionals_vanish_for_unperturbed_shock(shock_only):
    bg = shock_only.bg(t=3.0, X=0.5)
    assert all(0.0 <= f < 1e-25 for f in shock_only.functionals(bg.v, bg.u, t=3.0, X=0.5))


def test_functionals_without_perturbation_on_composite(baseline):
    bg = baseline.bg()
    G_S, G_R, G1, D, D1, D2 = baseline.functionals(bg.v, bg.u)
    assert (G_S, G_R, D, D1, D2) == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert G1 >= 0.0


def test_G_S_is_local_to_the_shock(baseline):
    t = 50.0
    bg = baseline.bg(t)
    v = bg.v + gauss(XI, 0.01, -150.0, 2.0)
    G_S, G_R = baseline.functionals(v, bg.u, t=t)[:2]
    assert G_R > 0.0
    assert G_S < 1e-8 * G_R


def test_D_matches_fourier_integral():
    flat = Waves(1.0, 1.0)
    eps = 1e-5
    L = XI[-1] - XI[0]
    k = 2 * math.pi * 40 / L
    v = 1.0 + eps * np.sin(k * (XI - XI[0]))
    D = flat.functionals(v, np.zeros_like(XI))[3]
    gamma = flat.cfg.gamma
    assert D == pytest.approx(eps ** 2 * k ** 2 * gamma ** 2 * L / 2, rel=1e-3)


@given(st.floats(-0.05, 0.05), st.floats(-40.0, 40.0), st.floats(1.0, 10.0))
def test_functionals_nonnegative(amp, center, width):
    w = Waves.cache
    bg = w.bg(t=5.0)
    vals = w.functionals(bg.v + gauss(XI, amp, center, width), bg.u - gauss(XI, amp, center, width), t=5.0)
    assert all(f >= 0.0 for f in vals)


Waves.cache = Waves(0.9, 0.8)


# -- wave interaction residuals -------------------------------------------------

def test_error_terms_vanish_for_pure_shock(shock_only):
    _, norms = wave_error_terms(shock_only.bg(t=4.0, X=0.3), shock_only.cfg, DXI)
    assert max(norms) < 1e-12


def test_error_terms_for_pure_rarefaction(rare_only):
    bg = rare_only.bg(t=2.0)
    (F1, F2, F3), _ = wave_error_terms(bg, rare_only.cfg, DXI)
    assert np.max(np.abs(F2)) < 1e-15
    assert np.max(np.abs(F1 + ddx(bg.uR_x / bg.vR, DXI))) < 1e-15


def test_F2_decays_log_linearly(baseline):
    ts = np.arange(0.0, 101.0, 10.0)
    f2 = np.array([wave_error_terms(baseline.bg(t), baseline.cfg, DXI)[1][1] for t in ts])
    slope = np.polyfit(ts, np.log(f2), 1)[0]
    assert slope < 0.0


def test_F2_consistent_with_interaction_norms(baseline):
    bg = baseline.bg()
    f2 = wave_error_terms(bg, baseline.cfg, DXI)[1][1]
    n = wave_interaction_norms(bg, baseline.cfg, DXI)
    assert 0.1 <= f2 / (n["shockx_rare_L2"] + n["rarex_shock_L2"]) <= 10.0


def test_interaction_norms_regression(baseline):
    n = wave_interaction_norms(baseline.bg(), baseline.cfg, DXI)
    for key, val in INTERACTION_T0.items():
        assert n[key] == pytest.approx(val, rel=1e-9)


def test_interaction_norms_vanish_without_rarefaction(shock_only):
    n = wave_interaction_norms(shock_only.bg(t=1.0), shock_only.cfg, DXI)
    assert all(v == 0.0 for v in n.values())


def test_interaction_L1_norms_decay(baseline):
    n0 = wave_interaction_norms(baseline.bg(0.0), baseline.cfg, DXI)
    n1 = wave_interaction_norms(baseline.bg(100.0), baseline.cfg, DXI)
    for key in ("shockx_rare_L1", "rarex_shockx_L1"):
        assert n1[key] < n0[key]


# -- Poincare and the quadratic identity ---------------------------------------

def test_poincare_constant():
    assert poincare_check(np.full(50, 3.2)) == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)


def test_poincare_linear_equality():
    lhs, rhs, margin = poincare_check(np.linspace(0, 1, 10_000))
    assert lhs == pytest.approx(1 / 12, abs=1e-8)
    assert rhs == pytest.approx(1 / 12, abs=1e-8)
    assert abs(margin) < 1e-8


def test_poincare_quadratic():
    y = np.linspace(0, 1, 10_000)
    lhs, rhs, margin = poincare_check(y ** 2)
    assert lhs == pytest.approx(4 / 45, abs=1e-7)
    assert rhs == pytest.approx(1 / 10, abs=1e-7)
    assert margin > 0


def test_poincare_too_few_samples():
    with pytest.raises(DomainError):
        poincare_check([1.0, 2.0])


def test_poincare_random_sine_series_and_equality_direction():
    from nswave.cli import random_sine_series
    rng = np.random.default_rng(0)
    y = np.linspace(0, 1, 4096)
    for _ in range(1000):
        f = random_sine_series(rng, y)
        lhs, rhs, margin = poincare_check(f)
        assert margin >= -1e-8
        if margin < 1e-6 and lhs > 0:
            corr = np.corrcoef(f, y - 0.5)[0, 1]
            assert abs(corr) > 0.999


@given(st.floats(-1.0, 1.0), st.floats(-1e-3, 1e-3))
def test_poincare_near_linear(slope, wobble):
    y = np.linspace(0, 1, 10_000)
    _, _, margin = poincare_check(slope * y + wobble * np.sin(2 * np.pi * y))
    assert margin >= -1e-8


def test_quadratic_identity_cases():
    assert quadratic_identity_residual(0.0, 0.0, 1.3) == 0.0
    assert quadratic_identity_residual(1.0, 1.3, 1.3) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        quadratic_identity_residual(1.0, 1.0, 0.0)


def test_quadratic_identity_random_sweep():
    rng = np.random.default_rng(1)
    z, w = rng.uniform(-10, 10, (2, 100_000))
    s = rng.uniform(0.5, 2.0, 100_000)
    rel = np.abs(quadratic_identity_residual(z, w, s)) / (1 + z * z + w * w)
    assert rel.max() < 1e-12


# -- distance to the exact composite -------------------------------------------

def test_sup_distance_needs_positive_time(baseline):
    bg = baseline.bg()
    with pytest.raises(DomainError):
        sup_distance_to_exact(0.0, XI, bg.v, bg.u, 0.0, baseline.profile, baseline.cfg)


def test_sup_distance_of_background_is_rarefaction_gap(baseline):
    cfg = baseline.cfg
    t = 2.0
    bg = baseline.bg(t)
    got = sup_distance_to_exact(t, XI, bg.v, bg.u, 0.0, baseline.profile, cfg)
    vr, ur = exact_rarefaction(t, XI + cfg.sigma * t, cfg)
    gap = max(np.max(np.abs(bg.vR - vr)), np.max(np.abs(bg.uR - ur)))
    assert got == pytest.approx(gap, rel=1e-12)


def test_sup_distance_far_field(baseline):
    cfg = baseline.cfg
    xi = np.array([-1e4, 1e4])
    v = np.array([cfg.v_minus, cfg.v_plus])
    u = np.array([cfg.u_minus, cfg.u_plus])
    assert sup_distance_to_exact(50.0, xi, v, u, 0.0, baseline.profile, cfg) < 1e-12


def test_record_header_order():
    assert DiagnosticRecord.header() == [
        "t", "X", "Xdot", "X_over_t", "perturb_L2_v", "perturb_L2_u", "perturb_H1", "sup_v", "sup_u",
        "sup_exact", "went", "G_S", "G_R", "G1", "D", "D1", "D2", "F1_L2", "F2_L2", "F3_L2", "mass_residual",
    ]
