"""Shift ODE for the shock location.

The shift ``X(t)`` moves only the shock layer of the composite wave. Its rate is
a weighted projection of the volume/pressure perturbation onto the shock
derivative, scaled by the gain ``M / delta_S``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .profiles import composite_wave, shock_second_derivs, weight_a
from .thermo import pressure, pressure_derivs


@dataclass(frozen=True)
class ShiftParams:
    M: float
    delta_S: float
    sigma_m: float
    alpha_m: float
    M_alt: float


def shift_constant_M(cfg, g=None):
    g = g or cfg.gas
    gam = g.gamma
    p_m, dp_m, _ = pressure_derivs(cfg.v_m, g)
    sigma_m = math.sqrt(-dp_m)
    alpha_m = (gam + 1.0) / (2.0 * gam * sigma_m * p_m)
    M = 5.0 * (gam + 1.0) * sigma_m ** 3 / (8.0 * gam * p_m)
    M_alt = 1.25 * sigma_m ** 4 * alpha_m
    if abs(M - M_alt) > 1e-13 * max(1.0, abs(M)):
        raise ConfigurationError(f"inconsistent shift constant: {M!r} vs {M_alt!r}")
    return ShiftParams(float(M), cfg.delta_S, float(sigma_m), float(alpha_m), float(M_alt))


def trapezoid(f, dxi):
    return dxi * (np.sum(f) - 0.5 * (f[0] + f[-1]))


def shift_rate(v, vbar, a, pS_xi, gamma, sigma, M, delta_S, dxi):
    """``Xdot`` from fields sampled on the grid."""
    if delta_S <= 0.0:
        return 0.0
    pv = np.exp(-gamma * np.log(v))
    pbar = np.exp(-gamma * np.log(vbar))
    integrand = a * pS_xi * ((pv - pbar) / (sigma * sigma) - (v - vbar))
    return -(M / delta_S) * trapezoid(integrand, dxi)


def shift_rhs(t, xi, v, X, profile, rare, weight, params, dxi=None):
    """``Xdot`` for the volume field ``v`` on the uniform grid ``xi`` at time ``t``."""
    cfg = profile.cfg
    if cfg.delta_S <= 0.0:
        return 0.0
    bg = composite_wave(t, xi, X, profile, rare)
    a, _ = weight_a(xi - X, weight)
    if dxi is None:
        dxi = xi[1] - xi[0]
    return shift_rate(v, bg.v, a, bg.pS_xi, cfg.gamma, cfg.sigma, params.M, cfg.delta_S, dxi)


def xdot_bound(v, vbar, gamma, params, lam, sigma):
    """Explicit bound ``M (1+lam) (||p(v)-p(vbar)||_inf / sigma^2 + ||v-vbar||_inf)`` on ``|Xdot|``.

    Uses ``a <= 1 + lam`` and that ``p(v_S)`` has total variation ``delta_S``.
    """
    pv = np.exp(-gamma * np.log(v))
    pbar = np.exp(-gamma * np.log(vbar))
    return params.M * (1.0 + lam) * (np.max(np.abs(pv - pbar)) / sigma ** 2 + np.max(np.abs(v - vbar)))


def shift_dX_bound(t, xi, v, X, profile, rare, weight, params):
    """Upper bound on ``|d Xdot / dX|`` at fixed fields, via the analytic X-derivative.

    ``d/dX`` of the integrand is bounded pointwise in absolute value; its
    integral therefore dominates the true derivative.
    """
    cfg = profile.cfg
    if cfg.delta_S <= 0.0:
        return 0.0
    g = cfg.gas
    bg = composite_wave(t, xi, X, profile, rare)
    a, a_prime = weight_a(xi - X, weight)
    vS_xixi, _ = shock_second_derivs(profile, xi - X)
    _, dpS, d2pS = pressure_derivs(bg.vS, g)
    pS_xixi = d2pS * bg.vS_xi ** 2 + dpS * vS_xixi
    pv = pressure(v, g)
    pbar, dpbar, _ = pressure_derivs(bg.v, g)
    s2 = cfg.sigma ** 2
    bracket = (pv - pbar) / s2 - (v - bg.v)
    # d/dX acting on xi - X flips sign of xi-derivatives; vbar depends on X through v_S
    d_bracket = (dpbar / s2 - 1.0) * bg.vS_xi
    d_integrand = -(a_prime * bg.pS_xi + a * pS_xixi) * bracket + a * bg.pS_xi * d_bracket
    return (params.M / cfg.delta_S) * trapezoid(np.abs(d_integrand), xi[1] - xi[0])
