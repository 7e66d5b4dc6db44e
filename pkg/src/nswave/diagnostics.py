"""Monitored functionals of the a-contraction stability theory.

All quantities are evaluated on the solver grid with the solver's difference
stencils and trapezoid quadrature, so that discrete identities carry over.
"""
import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import DomainError
from .euler_waves import exact_rarefaction
from .profiles import eval_shock
from .thermo import pressure, pressure_derivs, relative_Q


def trapezoid(f, dx):
    f = np.asarray(f)
    return float(dx * (np.sum(f) - 0.5 * (f[0] + f[-1])))


def ddx(f, dx):
    return np.gradient(f, dx, edge_order=2)


def d2dx2(f, dx):
    out = np.zeros_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (dx * dx)
    out[0], out[-1] = out[1], out[-2]
    return out


@dataclass
class DiagnosticRecord:
    t: float
    X: float
    Xdot: float
    X_over_t: float
    perturb_L2_v: float
    perturb_L2_u: float
    perturb_H1: float
    sup_v: float
    sup_u: float
    sup_exact: float
    went: float
    G_S: float
    G_R: float
    G1: float
    D: float
    D1: float
    D2: float
    F1_L2: float
    F2_L2: float
    F3_L2: float
    mass_residual: float

    @classmethod
    def header(cls):
        return [f.name for f in fields(cls)]

    def row(self):
        return list(astuple(self))


def effective_velocity(v, u, dxi):
    """``h = u - (ln v)_xi`` with the solver's central differences."""
    if np.any(np.asarray(v) <= 0.0):
        raise DomainError("specific volume must be positive")
    return u - ddx(np.log(v), dxi)


def background_h(bg, u_m, dxi):
    """Background effective velocity ``u_R + h_S - u_m``.

    The log-derivative of the shock is taken with the same stencil used for
    ``h`` so that an unperturbed pure shock gives exactly zero.
    """
    return bg.u - ddx(np.log(bg.vS), dxi)


def weighted_relative_entropy(v, h, vbar, hbar, a, dxi, g):
    """``int a (|h - hbar|^2/2 + Q(v|vbar)) dxi``."""
    dh = h - hbar
    return trapezoid(a * (0.5 * dh * dh + relative_Q(v, vbar, g)), dxi)


def stability_functionals(v, u, h, bg, hbar, lam, cfg, dxi):
    """``(G_S, G_R, G1, D, D1, D2)`` for the current fields against the shifted background."""
    g = cfg.gas
    dv = v - bg.v
    du = u - bg.u
    dp = pressure(v, g) - pressure(bg.v, g)
    vS_abs = np.abs(bg.vS_xi)
    G_S = trapezoid(vS_abs * dv * dv, dxi)
    G_R = trapezoid(np.abs(bg.uR_x) * dv * dv, dxi)
    if cfg.delta_S > 0.0:
        z = h - hbar - dp / cfg.sigma
        G1 = lam / cfg.delta_S * trapezoid(vS_abs * z * z, dxi)
    else:
        G1 = 0.0
    D = trapezoid(ddx(dp, dxi) ** 2, dxi)
    D1 = trapezoid(ddx(du, dxi) ** 2, dxi)
    D2 = trapezoid(d2dx2(du, dxi)[1:-1] ** 2, dxi) if du.size > 3 else 0.0
    return G_S, G_R, G1, D, D1, D2


def wave_error_terms(bg, cfg, dxi):
    """Interaction residuals ``F1, F2, F3`` of the composite wave and their L2 norms."""
    g = cfg.gas
    q_shock = bg.uS_xi / bg.vS
    q_full = bg.u_xi / bg.v
    F1 = ddx(q_shock - q_full, dxi)
    _, dp_full, _ = pressure_derivs(bg.v, g)
    _, dp_R, _ = pressure_derivs(bg.vR, g)
    F2 = dp_full * bg.v_xi - dp_R * bg.vR_x - bg.pS_xi
    F3 = ddx(bg.vS_xi / bg.vS - bg.v_xi / bg.v, dxi)
    norms = tuple(math.sqrt(trapezoid(F * F, dxi)) for F in (F1, F2, F3))
    return (F1, F2, F3), norms


def wave_interaction_norms(bg, cfg, dxi):
    """Products of shock and rarefaction components that measure their overlap.

    Returns a dict with the L1/L2 norms of ``vS_xi (vR - v_m)`` and
    ``vR_xi vS_xi`` and the L2 norm of ``vR_xi (vS - v_m)``.
    """
    a = bg.vS_xi * (bg.vR - cfg.v_m)
    b = bg.vR_x * bg.vS_xi
    c = bg.vR_x * (bg.vS - cfg.v_m)
    return {
        "shockx_rare_L1": trapezoid(np.abs(a), dxi),
        "rarex_shockx_L1": trapezoid(np.abs(b), dxi),
        "shockx_rare_L2": math.sqrt(trapezoid(a * a, dxi)),
        "rarex_shockx_L2": math.sqrt(trapezoid(b * b, dxi)),
        "rarex_shock_L2": math.sqrt(trapezoid(c * c, dxi)),
    }


def poincare_check(f):
    """Both sides of ``int |f - mean f|^2 <= 1/2 int y(1-y)|f'|^2`` on a uniform [0, 1] grid.

    Returns ``(lhs, rhs, rhs - lhs)``.
    """
    f = np.asarray(f, dtype=float)
    n = f.size
    if n < 3:
        raise DomainError("poincare_check needs at least 3 samples")
    dy = 1.0 / (n - 1)
    y = np.linspace(0.0, 1.0, n)
    mean = trapezoid(f, dy)
    lhs = trapezoid((f - mean) ** 2, dy)
    fp = ddx(f, dy)
    rhs = 0.5 * trapezoid(y * (1.0 - y) * fp * fp, dy)
    return lhs, rhs, rhs - lhs


def quadratic_identity_residual(z, w, sigma):
    """Residual of ``-(s/2) z^2 + w z = -(s/2)(z - w/s)^2 + w^2/(2 s)``."""
    if np.any(np.asarray(sigma) <= 0.0):
        raise DomainError("sigma must be positive")
    lhs = -0.5 * sigma * z * z + w * z
    rhs = -0.5 * sigma * (z - w / sigma) ** 2 + w * w / (2.0 * sigma)
    return lhs - rhs


def sup_distance_to_exact(t, xi, v, u, X, profile, cfg):
    """``sup |(v, u) - (exact fan + shifted shock - middle state)|`` over the grid."""
    if t <= 0.0:
        raise DomainError("exact rarefaction needs t > 0")
    vr, ur = exact_rarefaction(t, xi + cfg.sigma * t, cfg)
    vS, uS = eval_shock(profile, xi - X)[:2]
    ev = np.max(np.abs(v - (vr + vS - cfg.v_m)))
    eu = np.max(np.abs(u - (ur + uS - cfg.u_m)))
    return float(max(ev, eu))
