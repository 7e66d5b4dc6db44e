"""Explicit method-of-lines solver for compressible Navier-Stokes in the shock frame.

The fields ``(v, u)`` and the shift ``X`` form one ODE system advanced with
classical RK4. Boundary nodes carry time-dependent Dirichlet data taken from
the shifted composite wave.
"""
import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .config import RunConfig
from .diagnostics import (
    DiagnosticRecord,
    background_h,
    ddx,
    effective_velocity,
    stability_functionals,
    sup_distance_to_exact,
    trapezoid,
    wave_error_terms,
    wave_interaction_norms,
    weighted_relative_entropy,
)
from .errors import BlowUpError, ConfigurationError, StepError
from .euler_waves import WaveConfig
from .profiles import (
    ApproxRarefaction,
    CompositeFields,
    WeightFunction,
    approx_rarefaction_eval,
    eval_shock,
    solve_shock_profile,
    weight_a,
)
from .shift import shift_constant_M, shift_rate
from .thermo import eigenvalues


@dataclass(frozen=True)
class Grid1D:
    xi_min: float
    xi_max: float
    n: int

    def __post_init__(self):
        if not (self.xi_min < 0.0 < self.xi_max):
            raise ConfigurationError("grid must satisfy xi_min < 0 < xi_max")
        if self.n < 16:
            raise ConfigurationError("grid needs at least 16 nodes")

    @property
    def dxi(self):
        return (self.xi_max - self.xi_min) / (self.n - 1)

    @property
    def xi(self):
        return self.xi_min + self.dxi * np.arange(self.n)


@dataclass
class SimState:
    t: float
    v: np.ndarray
    u: np.ndarray
    X: float = 0.0
    mass_flux: float = 0.0  # time integral of the discrete boundary mass flux


def default_domain(cfg, t_end):
    width = 40.0 / max(cfg.delta_S, 0.1)
    w_minus = float(eigenvalues(cfg.v_minus, cfg.gas)[0])
    return -width - abs(w_minus - cfg.sigma) * t_end, width


def gaussian(xi, spec):
    return spec.amplitude * np.exp(-(((xi - spec.center) / spec.width) ** 2))


class Simulation:
    """Solver bound to one wave configuration and one grid."""

    def __init__(self, cfg, grid, lam=None, perturbations=(), check_bounds=True):
        self.cfg = cfg
        self.grid = grid
        self.xi = grid.xi
        self.dxi = grid.dxi
        self.profile = solve_shock_profile(cfg)
        self.rare = ApproxRarefaction.from_config(cfg)
        if cfg.delta_S > 0.0:
            self.weight = WeightFunction(math.sqrt(cfg.delta_S) if lam is None else lam, self.profile)
            self.shift_params = shift_constant_M(cfg)
        else:
            self.weight = WeightFunction(0.0 if lam is None else lam, self.profile)
            self.shift_params = None
        self.perturbations = tuple(perturbations)
        self.check_bounds = check_bounds
        self.v_lo = cfg.v_minus / 3.0
        self.v_hi = 3.0 * cfg.v_plus
        self._rare_cache = {}
        self._bc_idx = np.array([0, grid.n - 1])
        self.mass0 = None

    # -- background -----------------------------------------------------
    def _rarefaction(self, t):
        hit = self._rare_cache.get(t)
        if hit is None:
            hit = approx_rarefaction_eval(t, self.xi + self.cfg.sigma * t, self.rare)
            if len(self._rare_cache) >= 4:
                self._rare_cache.pop(next(iter(self._rare_cache)))
            self._rare_cache[t] = hit
        return hit

    def background(self, t, X):
        cfg = self.cfg
        vR, uR, vR_x, uR_x = self._rarefaction(t)
        vS, uS, hS, vS_xi, uS_xi, hS_xi, pS_xi = eval_shock(self.profile, self.xi - X)
        return CompositeFields(
            v=vR + vS - cfg.v_m, u=uR + uS - cfg.u_m, h=uR + hS - cfg.u_m,
            v_xi=vR_x + vS_xi, u_xi=uR_x + uS_xi,
            vR=vR, uR=uR, vR_x=vR_x, uR_x=uR_x,
            vS=vS, uS=uS, hS=hS, vS_xi=vS_xi, uS_xi=uS_xi, hS_xi=hS_xi, pS_xi=pS_xi,
        )

    def weight_on_grid(self, X):
        return weight_a(self.xi - X, self.weight)[0]

    # -- initial data -----------------------------------------------------
    def initial_state(self):
        bg = self.background(0.0, 0.0)
        v = bg.v.copy()
        u = bg.u.copy()
        for spec in self.perturbations:
            if spec.target == "v":
                v = v + gaussian(self.xi, spec)
            else:
                u = u + gaussian(self.xi, spec)
        if np.any(v <= 0.0):
            raise ConfigurationError("initial volume is not positive")
        state = SimState(0.0, v, u, 0.0, 0.0)
        self.mass0 = self.interior_mass(state)
        return state

    def perturbation_h1(self, state):
        bg = self.background(state.t, state.X)
        return h1_norm(state.v - bg.v, state.u - bg.u, self.dxi)

    def interior_mass(self, state):
        return float(self.dxi * np.sum(state.v[1:-1]))

    # -- right-hand side --------------------------------------------------
    def _apply_bc(self, t, X, v, u, bg=None):
        if bg is None:
            bg = self.background(t, X)
        v = v.copy()
        u = u.copy()
        v[self._bc_idx] = bg.v[self._bc_idx]
        u[self._bc_idx] = bg.u[self._bc_idx]
        return v, u, bg

    def _check(self, v, t):
        vmin = v.min()
        vmax = v.max()
        if not (vmin > 0.0) or not np.isfinite(vmax):
            raise BlowUpError(f"non-positive or non-finite volume at t={t:.6g}")
        if self.check_bounds and (vmin <= self.v_lo or vmax >= self.v_hi):
            raise BlowUpError(
                f"volume left ({self.v_lo:.4g}, {self.v_hi:.4g}) at t={t:.6g}: min={vmin:.6g}, max={vmax:.6g}"
            )

    def rhs(self, t, v, u, X):
        """Time derivatives ``(v_t, u_t, Xdot, boundary mass flux)`` at one stage."""
        cfg = self.cfg
        v, u, bg = self._apply_bc(t, X, v, u)
        self._check(v, t)
        dv, du = kernels.ns_rhs(v, u, self.dxi, cfg.sigma, cfg.gamma)
        if self.shift_params is not None:
            a = self.weight_on_grid(X)
            xdot = shift_rate(v, bg.v, a, bg.pS_xi, cfg.gamma, cfg.sigma,
                              self.shift_params.M, cfg.delta_S, self.dxi)
        else:
            xdot = 0.0
        q = cfg.sigma * v + u
        flux = 0.5 * (q[-1] + q[-2] - q[0] - q[1])
        return dv, du, xdot, flux

    def stable_dt(self, v):
        """Largest step allowed by advection and diffusion: ``min(dxi/s_max, dxi^2 min(v)/2)``."""
        s_max = self.cfg.sigma + float(np.max(eigenvalues(v, self.cfg.gas)[1]))
        return min(self.dxi / s_max, self.dxi ** 2 * float(v.min()) / 2.0)

    def advance(self, state, dt, check_cfl=True):
        if check_cfl and dt > self.stable_dt(state.v) * (1.0 + 1e-12):
            raise StepError(f"dt={dt:.6g} exceeds the stability bound {self.stable_dt(state.v):.6g}")
        t, v, u, X = state.t, state.v, state.u, state.X
        h2 = 0.5 * dt
        k1 = self.rhs(t, v, u, X)
        k2 = self.rhs(t + h2, v + h2 * k1[0], u + h2 * k1[1], X + h2 * k1[2])
        k3 = self.rhs(t + h2, v + h2 * k2[0], u + h2 * k2[1], X + h2 * k2[2])
        k4 = self.rhs(t + dt, v + dt * k3[0], u + dt * k3[1], X + dt * k3[2])
        c = dt / 6.0
        v_new = v + c * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        u_new = u + c * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        X_new = X + c * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        flux_new = state.mass_flux + c * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        t_new = t + dt
        v_new, u_new, _ = self._apply_bc(t_new, X_new, v_new, u_new)
        return SimState(t_new, v_new, u_new, X_new, flux_new)

    # -- diagnostics ------------------------------------------------------
    def xdot(self, state, bg=None):
        if self.shift_params is None:
            return 0.0
        bg = bg or self.background(state.t, state.X)
        a = self.weight_on_grid(state.X)
        return shift_rate(state.v, bg.v, a, bg.pS_xi, self.cfg.gamma, self.cfg.sigma,
                          self.shift_params.M, self.cfg.delta_S, self.dxi)

    def diagnose(self, state):
        cfg = self.cfg
        g = cfg.gas
        dxi = self.dxi
        bg = self.background(state.t, state.X)
        v, u = state.v, state.u
        dv = v - bg.v
        du = u - bg.u
        xdot = self.xdot(state, bg)
        h = effective_velocity(v, u, dxi)
        hbar = background_h(bg, cfg.u_m, dxi)
        a = self.weight_on_grid(state.X)
        went = weighted_relative_entropy(v, h, bg.v, hbar, a, dxi, g)
        G_S, G_R, G1, D, D1, D2 = stability_functionals(v, u, h, bg, hbar, self.weight.lam, cfg, dxi)
        _, (F1, F2, F3) = wave_error_terms(bg, cfg, dxi)
        sup_exact = (sup_distance_to_exact(state.t, self.xi, v, u, state.X, self.profile, cfg)
                     if state.t > 0.0 else float("nan"))
        mass_res = abs(self.interior_mass(state) - self.mass0 - state.mass_flux) if self.mass0 is not None else 0.0
        return DiagnosticRecord(
            t=state.t, X=state.X, Xdot=xdot,
            X_over_t=state.X / state.t if state.t > 0.0 else 0.0,
            perturb_L2_v=math.sqrt(trapezoid(dv * dv, dxi)),
            perturb_L2_u=math.sqrt(trapezoid(du * du, dxi)),
            perturb_H1=h1_norm(dv, du, dxi),
            sup_v=float(np.max(np.abs(dv))), sup_u=float(np.max(np.abs(du))),
            sup_exact=sup_exact, went=went,
            G_S=G_S, G_R=G_R, G1=G1, D=D, D1=D1, D2=D2,
            F1_L2=F1, F2_L2=F2, F3_L2=F3,
            mass_residual=mass_res,
        )

    def interaction_row(self, state):
        bg = self.background(state.t, state.X)
        row = {"t": state.t}
        row.update(wave_interaction_norms(bg, self.cfg, self.dxi))
        return row

    def snapshot(self, state):
        bg = self.background(state.t, state.X)
        h = effective_velocity(state.v, state.u, self.dxi)
        hbar = background_h(bg, self.cfg.u_m, self.dxi)
        a = self.weight_on_grid(state.X)
        return np.column_stack([self.xi, state.v, state.u, h, bg.v, bg.u, hbar, a])


def h1_norm(dv, du, dxi):
    total = 0.0
    for f in (dv, du):
        total += trapezoid(f * f, dxi) + trapezoid(ddx(f, dxi) ** 2, dxi)
    return math.sqrt(total)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

SNAPSHOT_HEADER = ["xi", "v", "u", "h", "v_bg", "u_bg", "h_bg", "a"]


@dataclass
class RunResult:
    config: RunConfig
    records: list = field(default_factory=list)
    interactions: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    final_state: SimState = None
    status: str = "ok"
    error: str = ""
    n_steps: int = 0
    xdot_ratio_max: float = 0.0
    summary: dict = field(default_factory=dict)


def build_simulation(config, check_bounds=True):
    cfg = WaveConfig.from_states(config.gamma, config.v_plus, config.u_plus, config.v_m, config.v_minus)
    lo, hi = default_domain(cfg, config.t_end)
    grid = Grid1D(lo if config.xi_min is None else config.xi_min,
                  hi if config.xi_max is None else config.xi_max,
                  config.n_cells)
    return Simulation(cfg, grid, config.lambda_weight, config.perturbations, check_bounds)


def run(config, progress=None):
    """Integrate from ``t = 0`` to ``t_end``; diagnostics every ``output_interval``.

    A :class:`BlowUpError` ends the run early with ``status = "blowup"``; the
    outputs gathered so far are kept.
    """
    sim = build_simulation(config)
    result = RunResult(config)
    state = sim.initial_state()

    outputs = [k * config.output_interval for k in range(int(math.floor(config.t_end / config.output_interval + 1e-9)) + 1)]
    if outputs[-1] < config.t_end:
        outputs.append(config.t_end)
    marks = sorted(set(outputs) | set(config.snapshot_times))
    snap_set = set(config.snapshot_times)
    out_set = set(outputs)

    def emit(st):
        if st.t in out_set:
            rec = sim.diagnose(st)
            result.records.append(rec)
            result.interactions.append(sim.interaction_row(st))
            bg = sim.background(st.t, st.X)
            err = float(np.max(np.abs(st.v - bg.v)))
            if err > 0.0:
                result.xdot_ratio_max = max(result.xdot_ratio_max, abs(rec.Xdot) / err)
        if st.t in snap_set:
            result.snapshots[st.t] = sim.snapshot(st)

    emit(state)
    try:
        for mark in marks[1:]:
            while state.t < mark:
                dt = config.cfl * sim.stable_dt(state.v)
                if state.t + dt >= mark or mark - (state.t + dt) < 1e-9 * max(1.0, mark):
                    dt = mark - state.t
                    state = sim.advance(state, dt, check_cfl=False)
                    state.t = mark
                else:
                    state = sim.advance(state, dt)
                result.n_steps += 1
            emit(state)
            if progress is not None:
                progress(state.t)
    except BlowUpError as exc:
        result.status = "blowup"
        result.error = str(exc)
    result.final_state = state
    result.summary = summarize(result)
    return result


def summarize(result):
    recs = result.records
    if not recs:
        return {}
    first, last = recs[0], recs[-1]
    series = np.array([r.perturb_H1 for r in recs])
    return {
        "status": result.status,
        "t_final": last.t,
        "final_sup": max(last.sup_v, last.sup_u),
        "initial_sup": max(first.sup_v, first.sup_u),
        "final_abs_Xdot": abs(last.Xdot),
        "final_X": last.X,
        "X_over_t": last.X_over_t,
        "went_ratio": last.went / first.went if first.went > 0.0 else float("nan"),
        "xdot_ratio_max": result.xdot_ratio_max,
        "h1_total_variation": float(np.sum(np.abs(np.diff(series)))),
        "n_steps": result.n_steps,
    }


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x)) if not math.isfinite(x) else format(float(x), ".17g")
    return str(x)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def write_outputs(result, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "diagnostics.csv"), DiagnosticRecord.header(),
              [r.row() for r in result.records])
    if result.interactions:
        keys = list(result.interactions[0].keys())
        write_csv(os.path.join(out_dir, "interactions.csv"), keys,
                  [[row[k] for k in keys] for row in result.interactions])
    for t, arr in sorted(result.snapshots.items()):
        write_csv(os.path.join(out_dir, f"snapshot_t{_fmt(t)}.csv"), SNAPSHOT_HEADER, arr.tolist())
    if result.summary:
        keys = list(result.summary.keys())
        write_csv(os.path.join(out_dir, "summary.csv"), keys, [[result.summary[k] for k in keys]])
