"""Inviscid Riemann-problem algebra for the composite 1-rarefaction + 2-shock."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .thermo import (
    GasParams,
    eigenvalues,
    lambda1_inverse,
    pressure,
    rarefaction_potential,
    riemann_invariant_z1,
)

DEFAULT_STRENGTH_CAP = 0.25


def shock_speed(v_m, v_plus, g):
    """Speed of the 2-shock joining ``v_m`` (left) to ``v_plus`` (right)."""
    if not (0.0 < v_m < v_plus):
        raise ConfigurationError(
            f"2-shock requires 0 < v_m < v_plus (got v_m={v_m}, v_plus={v_plus})"
        )
    return math.sqrt(-(pressure(v_plus, g) - pressure(v_m, g)) / (v_plus - v_m))


def s2_connect(v_plus, u_plus, v_m, g):
    """Velocity ``u_m`` of the state on the 2-shock curve through ``(v_plus, u_plus)``."""
    if v_m == v_plus:
        return float(u_plus)
    sigma = shock_speed(v_m, v_plus, g)
    return u_plus + sigma * (v_plus - v_m)


def r1_connect(v_m, u_m, v_minus, g):
    """Velocity ``u_minus`` on the 1-rarefaction curve through ``(v_m, u_m)``."""
    if v_minus == v_m:
        return float(u_m)
    if not (0.0 < v_minus < v_m):
        raise ConfigurationError(
            f"1-rarefaction requires 0 < v_minus < v_m (got v_minus={v_minus}, v_m={v_m})"
        )
    return u_m + rarefaction_potential(v_m, g) - rarefaction_potential(v_minus, g)


@dataclass(frozen=True)
class WaveConfig:
    gamma: float
    v_plus: float
    u_plus: float
    v_m: float
    u_m: float
    v_minus: float
    u_minus: float
    sigma: float
    delta_S: float
    delta_R: float

    @property
    def gas(self):
        return GasParams(self.gamma)

    @classmethod
    def from_states(cls, gamma, v_plus, u_plus, v_m, v_minus, strength_cap=DEFAULT_STRENGTH_CAP):
        """Forward construction from ``(gamma, v_plus, u_plus, v_m, v_minus)``.

        Degenerate waves (``v_m == v_plus`` or ``v_minus == v_m``) are allowed;
        ``sigma`` then falls back to the characteristic speed ``lambda_2(v_plus)``.
        """
        g = GasParams(gamma)
        if not (0.0 < v_minus <= v_m <= v_plus):
            raise ConfigurationError(
                "composite wave requires ordering v_minus < v_m < v_plus "
                f"(got v_minus={v_minus}, v_m={v_m}, v_plus={v_plus})"
            )
        if v_m < v_plus:
            sigma = shock_speed(v_m, v_plus, g)
        else:
            sigma = float(eigenvalues(v_plus, g)[1])
        u_m = s2_connect(v_plus, u_plus, v_m, g)
        u_minus = r1_connect(v_m, u_m, v_minus, g)
        delta_S = abs(float(pressure(v_plus, g) - pressure(v_m, g)))
        delta_R = abs(v_m - v_minus)
        if delta_S > strength_cap or delta_R > strength_cap:
            raise ConfigurationError(
                f"wave strengths (delta_S={delta_S:.4g}, delta_R={delta_R:.4g}) exceed cap {strength_cap}"
            )
        return cls(gamma, v_plus, u_plus, v_m, float(u_m), v_minus, float(u_minus),
                   float(sigma), delta_S, delta_R)

    def rh_residuals(self):
        """Residuals of both jump conditions across the 2-shock."""
        g = self.gas
        dv = self.v_plus - self.v_m
        du = self.u_plus - self.u_m
        r1 = -self.sigma * dv - du
        r2 = -self.sigma * du + (pressure(self.v_plus, g) - pressure(self.v_m, g))
        return float(r1), float(r2)

    def lax_holds(self):
        g = self.gas
        return eigenvalues(self.v_plus, g)[1] < self.sigma < eigenvalues(self.v_m, g)[1]


def exact_rarefaction(t, x, cfg, g=None):
    """Self-similar 1-rarefaction fan between ``(v_minus, u_minus)`` and ``(v_m, u_m)``."""
    if t <= 0.0:
        raise DomainError("exact rarefaction is defined only for t > 0")
    g = g or cfg.gas
    x = np.asarray(x, dtype=float)
    w_minus = eigenvalues(cfg.v_minus, g)[0]
    w_m = eigenvalues(cfg.v_m, g)[0]
    w = np.clip(x / t, w_minus, w_m)
    v = lambda1_inverse(w, g)
    # snap the constant states so that they match the end states bit-for-bit
    v = np.where(x / t <= w_minus, cfg.v_minus, v)
    v = np.where(x / t >= w_m, cfg.v_m, v)
    u = cfg.u_m + rarefaction_potential(cfg.v_m, g) - rarefaction_potential(v, g)
    u = np.where(x / t <= w_minus, cfg.u_minus, u)
    u = np.where(x / t >= w_m, cfg.u_m, u)
    return v, u


def riemann_intermediate(v_minus, u_minus, v_plus, u_plus, g, tol=1e-12):
    """Intermediate state of the R1 + S2 Riemann solution, by bisection on ``v_m``.

    The objective ``u_S2(v) - u_R1(v)`` is strictly decreasing in ``v`` on
    ``[v_minus, v_plus]``.
    """
    def gap(v):
        u_r1 = u_minus + rarefaction_potential(v_minus, g) - rarefaction_potential(v, g)
        return s2_connect(v_plus, u_plus, v, g) - u_r1

    lo, hi = float(v_minus), float(v_plus)
    if lo > hi:
        raise ConfigurationError("R1+S2 configuration requires v_minus <= v_plus")
    f_lo, f_hi = gap(lo), gap(hi)
    if abs(f_lo) <= 1e-14:
        return lo, float(s2_connect(v_plus, u_plus, lo, g))
    if abs(f_hi) <= 1e-14:
        return hi, float(u_plus)
    if f_lo < 0.0:
        raise ConfigurationError(
            "no intermediate state: left state lies beyond the S2 curve (would need an S1 wave)"
        )
    if f_hi > 0.0:
        raise ConfigurationError(
            "no intermediate state: right state lies beyond the R1 curve (would need an R2 wave)"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    v_m = 0.5 * (lo + hi)
    return v_m, float(s2_connect(v_plus, u_plus, v_m, g))
