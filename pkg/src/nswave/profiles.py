"""Viscous shock profile, smooth approximate rarefaction, composite wave and weight."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError, ProfileError
from .euler_waves import WaveConfig
from .thermo import eigenvalues, lambda1_inverse, pressure, pressure_derivs, rarefaction_potential

PROFILE_TOL = 1e-10


@dataclass(frozen=True)
class ShockProfile:
    """Tabulated 2-viscous shock ``(v, u, h)(xi)`` with ``v(0) = (v_m + v_plus)/2``.

    Values between samples come from cubic Hermite interpolation using the
    exact slopes; derivatives are always taken from the ODE right-hand side.
    """

    cfg: WaveConfig
    xi0: float
    step: float
    v_table: np.ndarray = field(repr=False)
    dv_table: np.ndarray = field(repr=False)

    @property
    def xi_grid(self):
        return self.xi0 + self.step * np.arange(self.v_table.size)

    @property
    def normalization(self):
        return 0.0

    @property
    def trivial(self):
        return self.v_table.size < 2

    @property
    def v_s(self):
        return self.v_table

    @property
    def u_s(self):
        c = self.cfg
        return c.u_m - c.sigma * (self.v_table - c.v_m)

    @property
    def h_s(self):
        return self.u_s + self._g(self.v_table) / self.cfg.sigma

    def _g(self, v):
        c = self.cfg
        gam = c.gamma
        return c.sigma ** 2 * (v - c.v_m) + np.exp(-gam * np.log(v)) - c.v_m ** -gam

    def rhs(self, v):
        """Profile ODE right-hand side ``v' = -(v/sigma) g(v)``."""
        return -(v / self.cfg.sigma) * self._g(v)

    def rhs_prime(self, v):
        c = self.cfg
        _, dp, _ = pressure_derivs(v, c.gas)
        return -(self._g(v) + v * (c.sigma ** 2 + dp)) / c.sigma

    def v_at(self, xi):
        xi = np.ascontiguousarray(np.atleast_1d(np.asarray(xi, dtype=float)))
        c = self.cfg
        if self.trivial:
            return np.full(xi.shape, c.v_plus)
        return kernels.hermite_eval(xi, self.xi0, self.step, self.v_table, self.dv_table, c.v_m, c.v_plus)

    def v_xi_at(self, xi):
        v = self.v_at(xi)
        dv = self.rhs(v)
        # outside the table the extension is exactly constant
        return v, np.where(self._outside(xi), 0.0, dv)

    def _outside(self, xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if self.trivial:
            return np.ones(xi.shape, dtype=bool)
        return (xi < self.xi0) | (xi > self.xi0 + self.step * (self.v_table.size - 1))


def solve_shock_profile(cfg, g=None, tol=PROFILE_TOL):
    """Integrate the viscous shock ODE outward from ``xi = 0`` with fixed-step RK4.

    Step is ``delta_S/50`` and each tail is marched until it is within ``tol``
    of its end state, or ``|xi| = 50/delta_S`` (then :class:`ProfileError`).
    """
    g = g or cfg.gas
    if cfg.delta_S <= 0.0:
        return ShockProfile(cfg, 0.0, 1.0, np.array([cfg.v_plus]), np.array([0.0]))
    v_m, v_p, sigma = cfg.v_m, cfg.v_plus, cfg.sigma

    probe = np.linspace(v_m, v_p, 1002)[1:-1]
    g_probe = sigma ** 2 * (probe - v_m) + pressure(probe, g) - pressure(v_m, g)
    if np.any(g_probe >= 0.0):
        raise ConfigurationError("shock ODE has an interior equilibrium: not an admissible 2-shock")

    step = cfg.delta_S / 50.0
    n_max = int(math.ceil((50.0 / cfg.delta_S) / step))
    v0 = 0.5 * (v_m + v_p)
    right, ok_r = kernels.profile_march(v0, v_m, sigma, g.gamma, step, v_p, tol, n_max)
    left, ok_l = kernels.profile_march(v0, v_m, sigma, g.gamma, -step, v_m, tol, n_max)
    if not (ok_r and ok_l):
        raise ProfileError(f"profile tails did not reach tolerance {tol} within |xi| = {50.0 / cfg.delta_S:.4g}")
    table = np.concatenate([left[::-1], right[1:]])
    prof = ShockProfile(cfg, -step * (left.size - 1), step, table, np.empty(0))
    object.__setattr__(prof, "dv_table", prof.rhs(table))
    return prof


def eval_shock(profile, xi):
    """Shock fields and first derivatives at ``xi``.

    Returns ``(v, u, h, v_xi, u_xi, h_xi, p_xi)`` as arrays.
    """
    c = profile.cfg
    v, v_xi = profile.v_xi_at(xi)
    u = c.u_m - c.sigma * (v - c.v_m)
    if profile.trivial:
        h = u.copy()
    else:
        h = u + profile._g(v) / c.sigma
    _, dp, _ = pressure_derivs(v, c.gas)
    p_xi = dp * v_xi
    return v, u, h, v_xi, -c.sigma * v_xi, p_xi / c.sigma, p_xi


def shock_second_derivs(profile, xi):
    """``(v_xixi, u_xixi)`` from differentiating the profile ODE."""
    v, v_xi = profile.v_xi_at(xi)
    if profile.trivial:
        return np.zeros_like(v), np.zeros_like(v)
    v_xixi = profile.rhs_prime(v) * v_xi
    return v_xixi, -profile.cfg.sigma * v_xixi


def linearized_tail_rate(cfg, side="right"):
    """Decay rate of ``|v - v_end|`` predicted by linearizing the profile ODE."""
    g = cfg.gas
    v_end = cfg.v_plus if side == "right" else cfg.v_m
    _, dp, _ = pressure_derivs(v_end, g)
    return abs(v_end * (cfg.sigma ** 2 + dp) / cfg.sigma)


# ---------------------------------------------------------------------------
# approximate rarefaction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApproxRarefaction:
    cfg: WaveConfig
    w_minus: float
    w_m: float

    @classmethod
    def from_config(cls, cfg):
        g = cfg.gas
        return cls(cfg, float(eigenvalues(cfg.v_minus, g)[0]), float(eigenvalues(cfg.v_m, g)[0]))


def burgers_w(s, x, rare):
    """Solution ``(w, w_x)`` of Burgers' equation with tanh data at Burgers time ``s``."""
    if s < 0.0:
        raise DomainError("Burgers time must be nonnegative")
    x = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
    c = 0.5 * (rare.w_m + rare.w_minus)
    d = 0.5 * (rare.w_m - rare.w_minus)
    w, w_x = kernels.burgers(float(s), x, c, d)
    # c + d tanh can round one ulp past the end values
    return np.clip(w, rare.w_minus, rare.w_m), w_x


def approx_rarefaction_eval(t, x, rare, g=None):
    """Smooth 1-rarefaction ``(v, u, v_x, u_x)`` at time ``t`` (Burgers time ``1 + t``)."""
    if t < 0.0:
        raise DomainError("time must be nonnegative")
    cfg = rare.cfg
    g = g or cfg.gas
    gam = g.gamma
    w, w_x = burgers_w(1.0 + t, x, rare)
    v = lambda1_inverse(w, g)
    u = cfg.u_m + rarefaction_potential(cfg.v_m, g) - rarefaction_potential(v, g)
    # lambda_1'(v) v_x = w_x  and  u_x = -lambda_1(v) v_x
    v_x = 2.0 * w_x * np.exp(0.5 * (gam + 3.0) * np.log(v)) / (math.sqrt(gam) * (gam + 1.0))
    u_x = 2.0 * v * w_x / (gam + 1.0)
    return v, u, v_x, u_x


# ---------------------------------------------------------------------------
# composite wave and weight
# ---------------------------------------------------------------------------

@dataclass
class CompositeFields:
    v: np.ndarray
    u: np.ndarray
    h: np.ndarray
    v_xi: np.ndarray
    u_xi: np.ndarray
    # components
    vR: np.ndarray
    uR: np.ndarray
    vR_x: np.ndarray
    uR_x: np.ndarray
    vS: np.ndarray
    uS: np.ndarray
    hS: np.ndarray
    vS_xi: np.ndarray
    uS_xi: np.ndarray
    hS_xi: np.ndarray
    pS_xi: np.ndarray


def composite_wave(t, xi, X, profile, rare, g=None):
    """Approximate rarefaction plus shock shifted by ``X``, in shock-frame coordinates."""
    cfg = profile.cfg
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    vR, uR, vR_x, uR_x = approx_rarefaction_eval(t, xi + cfg.sigma * t, rare, g)
    vS, uS, hS, vS_xi, uS_xi, hS_xi, pS_xi = eval_shock(profile, xi - X)
    v = vR + vS - cfg.v_m
    if np.any(v <= 0.0):
        raise ConfigurationError("composite wave produced a non-positive volume")
    return CompositeFields(
        v=v, u=uR + uS - cfg.u_m, h=uR + hS - cfg.u_m,
        v_xi=vR_x + vS_xi, u_xi=uR_x + uS_xi,
        vR=vR, uR=uR, vR_x=vR_x, uR_x=uR_x,
        vS=vS, uS=uS, hS=hS, vS_xi=vS_xi, uS_xi=uS_xi, hS_xi=hS_xi, pS_xi=pS_xi,
    )


@dataclass(frozen=True)
class WeightFunction:
    lam: float
    profile: ShockProfile

    def __post_init__(self):
        dS = self.profile.cfg.delta_S
        if dS <= 0.0:
            return
        if not (self.lam > dS):
            raise ConfigurationError(
                f"weight amplitude lambda={self.lam:.6g} must exceed the shock strength delta_S={dS:.6g}"
            )
        if self.lam > math.sqrt(dS) * (1.0 + 1e-12):
            raise ConfigurationError(
                f"weight amplitude lambda={self.lam:.6g} must not exceed sqrt(delta_S)={math.sqrt(dS):.6g}"
            )

    @classmethod
    def default(cls, profile):
        return cls(math.sqrt(profile.cfg.delta_S), profile)


def weight_a(xi, weight):
    """Weight ``a(xi) = 1 + (lambda/delta_S)(p(v_m) - p(v_S(xi)))`` and ``a'``."""
    prof = weight.profile
    cfg = prof.cfg
    v, v_xi = prof.v_xi_at(xi)
    if prof.trivial:
        return np.ones_like(v), np.zeros_like(v)
    g = cfg.gas
    p, dp, _ = pressure_derivs(v, g)
    k = weight.lam / cfg.delta_S
    return 1.0 + k * (pressure(cfg.v_m, g) - p), -k * dp * v_xi
