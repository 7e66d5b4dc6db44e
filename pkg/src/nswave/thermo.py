"""Gamma-law thermodynamics for the barotropic Navier-Stokes system.

Pressure is ``p(v) = v**-gamma`` with ``b = mu = 1``. All powers are evaluated
as ``exp(alpha * log(v))``. Functions accept scalars or numpy arrays.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GasParams:
    gamma: float = 5.0 / 3.0

    def __post_init__(self):
        if not (self.gamma > 1.0):
            raise DomainError(f"gamma must exceed 1 (got {self.gamma})")


def _check_positive(*vals):
    for val in vals:
        if np.any(np.asarray(val) <= 0.0):
            raise DomainError("specific volume must be positive")


def _pow(v, alpha):
    return np.exp(alpha * np.log(v))


def pressure(v, g):
    _check_positive(v)
    return _pow(v, -g.gamma)


def pressure_derivs(v, g):
    """Return ``(p, p', p'')`` at ``v``."""
    _check_positive(v)
    gam = g.gamma
    p = _pow(v, -gam)
    dp = -gam * p / v
    d2p = gam * (gam + 1.0) * p / (v * v)
    return p, dp, d2p


def internal_energy_Q(v, g):
    """``Q(v) = v**(1-gamma)/(gamma-1)``, so that ``Q' = -p``."""
    _check_positive(v)
    return _pow(v, 1.0 - g.gamma) / (g.gamma - 1.0)


def eigenvalues(v, g):
    _check_positive(v)
    lam2 = np.sqrt(g.gamma) * _pow(v, -0.5 * (g.gamma + 1.0))
    return -lam2, lam2


def lambda1_inverse(w, g):
    """Specific volume ``v`` with ``lambda_1(v) = w`` (``w < 0``)."""
    w = np.asarray(w, dtype=float)
    if np.any(w >= 0.0):
        raise DomainError("lambda_1 takes only negative values")
    return _pow(g.gamma / (w * w), 1.0 / (g.gamma + 1.0))


def rarefaction_potential(v, g):
    """Antiderivative ``A(v)`` of ``lambda_1``: ``A(v) = 2 sqrt(gamma)/(gamma-1) v**(-(gamma-1)/2)``."""
    _check_positive(v)
    gam = g.gamma
    return 2.0 * np.sqrt(gam) / (gam - 1.0) * _pow(v, -0.5 * (gam - 1.0))


def riemann_invariant_z1(v, u, g):
    return u + rarefaction_potential(v, g)


def relative_pressure(v, w, g):
    """``p(v|w) = p(v) - p(w) - p'(w)(v - w)``; nonnegative by convexity."""
    _check_positive(v, w)
    pv = pressure(v, g)
    pw, dpw, _ = pressure_derivs(w, g)
    return pv - pw - dpw * (v - w)


def relative_Q(v, w, g):
    """``Q(v|w) = Q(v) - Q(w) + p(w)(v - w)``."""
    _check_positive(v, w)
    return internal_energy_Q(v, g) - internal_energy_Q(w, g) + pressure(w, g) * (v - w)


def relative_entropy(v, h, vbar, hbar, g):
    """Pointwise ``|h - hbar|^2/2 + Q(v|vbar)``."""
    dh = np.asarray(h) - np.asarray(hbar)
    return 0.5 * dh * dh + relative_Q(v, vbar, g)


def p_relative_limit(w, g):
    """Limit of ``p(v|w)/|p(v)-p(w)|^2`` as ``v -> w``."""
    return (g.gamma + 1.0) / (2.0 * g.gamma * pressure(w, g))


def Q_relative_limit(w, g):
    """Limit of ``Q(v|w)/|p(v)-p(w)|^2`` as ``v -> w``."""
    return _pow(pressure(w, g), -1.0 / g.gamma - 1.0) / (2.0 * g.gamma)
