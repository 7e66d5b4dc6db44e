"""Command line entry point: ``nswave {profile,rarefaction,simulate,verify,sweep}``."""
import argparse
import itertools
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS_HELP, RunConfig, baseline_config, format_config, parse_config, parse_pairs
from .diagnostics import poincare_check, quadratic_identity_residual
from .errors import BlowUpError, ConfigurationError, DomainError, ProfileError
from .euler_waves import WaveConfig, exact_rarefaction
from .profiles import (
    ApproxRarefaction,
    WeightFunction,
    approx_rarefaction_eval,
    burgers_w,
    eval_shock,
    linearized_tail_rate,
    solve_shock_profile,
    weight_a,
)
from .shift import shift_constant_M
from .solver import build_simulation, run, summarize, write_csv, write_outputs
from .thermo import GasParams, p_relative_limit, Q_relative_limit, pressure, relative_pressure, relative_Q

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOWUP = 2
EXIT_VERIFY = 3

log = logging.getLogger("nswave")


def load_config(path=None, overrides=(), baseline=False):
    base = baseline_config() if baseline else RunConfig()
    if path:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file {path!r}: {exc.strerror}") from None
        base = parse_config(text, base)
    pairs = []
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        pairs.append((key.strip(), raw.strip()))
    return parse_pairs(pairs, base)


def wave_config(config):
    return WaveConfig.from_states(config.gamma, config.v_plus, config.u_plus, config.v_m, config.v_minus)


# ---------------------------------------------------------------------------
# profile / rarefaction
# ---------------------------------------------------------------------------

PROFILE_HEADER = ["xi", "v_S", "u_S", "h_S", "v_S_xi", "a"]
RAREFACTION_HEADER = ["x", "v_R", "u_R", "v_R_x", "u_R_x", "v_exact", "u_exact"]


def profile_table(config):
    cfg = wave_config(config)
    prof = solve_shock_profile(cfg)
    xi = prof.xi_grid
    v, u, h, v_xi = eval_shock(prof, xi)[:4]
    if prof.trivial:
        a = np.ones_like(xi)
    else:
        lam = math.sqrt(cfg.delta_S) if config.lambda_weight is None else config.lambda_weight
        a = weight_a(xi, WeightFunction(lam, prof))[0]
    return np.column_stack([xi, v, u, h, v_xi, a])


def rarefaction_table(config):
    """Smooth and exact rarefaction at ``t_end`` on the solver grid (lab frame ``x``)."""
    sim = build_simulation(config)
    cfg = sim.cfg
    t = config.t_end
    x = sim.xi + cfg.sigma * t
    vR, uR, vR_x, uR_x = approx_rarefaction_eval(t, x, sim.rare)
    if t > 0.0:
        ve, ue = exact_rarefaction(t, x, cfg)
    else:
        ve = np.where(x < 0.0, cfg.v_minus, cfg.v_m)
        ue = np.where(x < 0.0, cfg.u_minus, cfg.u_m)
    return np.column_stack([x, vR, uR, vR_x, uR_x, ve, ue])


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    bound: float
    message: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        text = f"{self.name},{status},{self.measured:.6e},{self.bound:.6e}"
        return text + (f",{self.message}" if self.message else "")


def _check_quadratic(config, cfg):
    rng = np.random.default_rng(config.seed)
    n = 100_000
    z = rng.uniform(-10.0, 10.0, n)
    w = rng.uniform(-10.0, 10.0, n)
    s = rng.uniform(0.5, 2.0, n)
    rel = np.abs(quadratic_identity_residual(z, w, s)) / (1.0 + z * z + w * w)
    val = float(rel.max())
    return CheckResult("quadratic_identity", val < 1e-12, val, 1e-12)


def _check_M(config, cfg):
    if cfg.delta_S == 0.0:
        return CheckResult("shift_constant_M", True, 0.0, 1e-13, "no shock")
    sp = shift_constant_M(cfg)
    val = abs(sp.M - sp.M_alt)
    return CheckResult("shift_constant_M", val < 1e-13, val, 1e-13)


def _check_rh(config, cfg):
    val = float(max(abs(r) for r in cfg.rh_residuals()))
    ok = val < 1e-12 and cfg.lax_holds()
    return CheckResult("rankine_hugoniot", ok, val, 1e-12, "" if cfg.lax_holds() else "Lax condition violated")


def _check_poincare_linear(config, cfg):
    y = np.linspace(0.0, 1.0, 10_000)
    lhs, rhs, _ = poincare_check(y)
    val = max(abs(lhs - 1.0 / 12.0), abs(rhs - 1.0 / 12.0))
    return CheckResult("poincare_linear", val < 1e-8, val, 1e-8)


def random_sine_series(rng, y, terms=10):
    coef = rng.uniform(-1.0, 1.0, terms)
    coef /= max(1.0, float(np.sum(np.abs(coef))))
    k = np.arange(1, terms + 1)
    return np.sin(np.pi * np.outer(y, k)) @ coef


def _check_poincare_random(config, cfg):
    rng = np.random.default_rng(config.seed + 1)
    y = np.linspace(0.0, 1.0, 4096)
    worst = min(poincare_check(random_sine_series(rng, y))[2] for _ in range(1000))
    return CheckResult("poincare_random", worst >= -1e-8, worst, -1e-8)


def relative_asymptotic_errors(gammas=(1.4, 5.0 / 3.0, 2.0), ws=(0.8, 1.0, 1.2), dv=1e-3):
    """Largest relative gaps of ``p(v|w)`` and ``Q(v|w)`` ratios from their limits."""
    worst_p = worst_q = 0.0
    for gamma in gammas:
        g = GasParams(gamma)
        for w in ws:
            for v in (w - dv, w + dv):
                dp2 = (pressure(v, g) - pressure(w, g)) ** 2
                rp = relative_pressure(v, w, g) / dp2
                rq = relative_Q(v, w, g) / dp2
                worst_p = max(worst_p, abs(rp / p_relative_limit(w, g) - 1.0))
                worst_q = max(worst_q, abs(rq / Q_relative_limit(w, g) - 1.0))
    return worst_p, worst_q


def _check_relative(config, cfg):
    wp, wq = relative_asymptotic_errors()
    return [CheckResult("relative_pressure_limit", wp < 0.01, wp, 0.01),
            CheckResult("relative_Q_limit", wq < 0.01, wq, 0.01)]


def tail_log_slope(profile, side="right", window=(1e-8, 1e-4)):
    """Least-squares slope of ``log|v - v_end|`` over the part of the tail inside ``window``."""
    cfg = profile.cfg
    xi = profile.xi_grid
    if side == "right":
        gap = cfg.v_plus - profile.v_table
    else:
        gap = profile.v_table - cfg.v_m
    sel = (gap > window[0]) & (gap < window[1])
    sel &= (xi > 0.0) if side == "right" else (xi < 0.0)
    if sel.sum() < 3:
        raise ProfileError(f"{side} tail has too few samples for a slope fit")
    return abs(float(np.polyfit(xi[sel], np.log(gap[sel]), 1)[0]))


def profile_checks(cfg):
    prof = solve_shock_profile(cfg)
    v = prof.v_table
    u = prof.u_s
    dv = float(np.min(np.diff(v)))
    du = float(np.max(np.diff(u)))
    end = max(abs(v[0] - cfg.v_m), abs(v[-1] - cfg.v_plus))
    slope = tail_log_slope(prof, "right")
    rate = linearized_tail_rate(cfg, "right")
    ratio = max(slope / rate, rate / slope)
    return [
        CheckResult("profile_monotone_v", dv > 0.0, dv, 0.0),
        CheckResult("profile_monotone_u", du < 0.0, du, 0.0),
        CheckResult("profile_endpoints", end < 1e-10, end, 1e-10),
        CheckResult("profile_tail_rate", ratio <= 2.0, ratio, 2.0),
    ]


def _check_profile(config, cfg):
    if cfg.delta_S == 0.0:
        return [CheckResult("profile_monotone_v", True, 0.0, 0.0, "no shock")]
    return profile_checks(cfg)


def burgers_checks(cfg, times=None, half_width=200.0, n=4001):
    """Positivity and the slope cap ``w_x <= min((w_m - w_minus)/2, 1/s)`` on a time grid.

    Sample points are characteristic images of feet ``|x0| <= half_width``; further
    out ``sech^2`` underflows and ``w_x`` is zero in floating point.
    """
    rare = ApproxRarefaction.from_config(cfg)
    if times is None:
        times = np.geomspace(1.0, 200.0, 25)
    c = 0.5 * (rare.w_m + rare.w_minus)
    d = 0.5 * (rare.w_m - rare.w_minus)
    feet = np.linspace(-half_width, half_width, n)
    min_wx = math.inf
    worst = 0.0
    for s in times:
        x = feet + s * (c + d * np.tanh(feet))
        wx = burgers_w(float(s), x, rare)[1]
        min_wx = min(min_wx, float(wx.min()))
        if d > 0.0:
            worst = max(worst, float(wx.max()) / min(d, 1.0 / s))
    return min_wx, worst


def _check_burgers(config, cfg):
    if cfg.delta_R == 0.0:
        return [CheckResult("burgers_positive", True, 0.0, 0.0, "no rarefaction")]
    min_wx, worst = burgers_checks(cfg)
    return [CheckResult("burgers_positive", min_wx > 0.0, min_wx, 0.0),
            CheckResult("burgers_slope_cap", worst <= 1.0 + 1e-6, worst, 1.0 + 1e-6)]


def _check_weight(config, cfg):
    dS = cfg.delta_S
    lam = math.sqrt(dS) if config.lambda_weight is None else config.lambda_weight
    ok = dS == 0.0 or (dS < lam <= math.sqrt(dS) * (1.0 + 1e-12))
    msg = "" if ok else f"weight window requires delta_S < lambda <= sqrt(delta_S) (delta_S={dS:.6g})"
    return CheckResult("weight_window", ok, lam, math.sqrt(dS), msg)


CHECKS = (
    _check_quadratic,
    _check_M,
    _check_rh,
    _check_poincare_linear,
    _check_poincare_random,
    _check_relative,
    _check_profile,
    _check_burgers,
    _check_weight,
)


def verify_suite(config):
    cfg = wave_config(config)
    results = []
    for check in CHECKS:
        out = check(config, cfg)
        results.extend(out if isinstance(out, list) else [out])
    return results


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SWEEP_FIELDS = ["status", "final_sup", "initial_sup", "final_abs_Xdot", "final_X", "X_over_t",
                "went_ratio", "xdot_ratio_max", "n_steps", "error"]


def parse_grid(items):
    """``["n_cells=512,1024", "v_minus=0.8"]`` -> ordered list of (key, values)."""
    grid = []
    for item in items:
        if "=" not in item:
            raise ConfigurationError(f"--grid expects key=v1,v2,..., got {item!r}")
        key, raw = item.split("=", 1)
        vals = [s.strip() for s in raw.split(",") if s.strip()]
        if not vals:
            raise ConfigurationError(f"--grid {key}: no values")
        grid.append((key.strip(), vals))
    return grid


def sweep_points(base, grid):
    keys = [k for k, _ in grid]
    points = []
    for combo in itertools.product(*[vals for _, vals in grid]):
        points.append((dict(zip(keys, combo)), parse_pairs(list(zip(keys, combo)), base)))
    return points


def _sweep_worker(args):
    index, config, out_dir = args
    run_dir = os.path.join(out_dir, f"run_{index:03d}")
    os.makedirs(run_dir, exist_ok=True)
    with open(os.path.join(run_dir, "config.txt"), "w") as fh:
        fh.write(format_config(config))
    try:
        result = run(config)
    except (ConfigurationError, ProfileError, DomainError) as exc:
        return {"status": "config_error", "error": str(exc)}
    write_outputs(result, run_dir)
    summary = dict(result.summary)
    summary["error"] = result.error
    return summary


def convergence_rows(values, summaries, keys=("final_X", "final_sup")):
    """Successive differences and observed ratios of scalar outputs across refinements."""
    rows = []
    order = sorted(range(len(values)), key=lambda i: values[i])
    for j in range(len(order)):
        i = order[j]
        row = [values[i]]
        for k in keys:
            row.append(summaries[i].get(k, float("nan")))
            if j + 1 < len(order):
                d = abs(summaries[order[j + 1]].get(k, math.nan) - summaries[i].get(k, math.nan))
            else:
                d = math.nan
            row.append(d)
            if j + 2 < len(order):
                d2 = abs(summaries[order[j + 2]].get(k, math.nan) - summaries[order[j + 1]].get(k, math.nan))
                ratio = d / d2 if d2 > 0.0 else math.nan
            else:
                ratio = math.nan
            row.append(ratio)
        rows.append(row)
    header = ["n_cells"]
    for k in keys:
        header += [k, f"{k}_diff_next", f"{k}_ratio"]
    return header, rows


def sweep(base, grid, out_dir, workers=1):
    points = sweep_points(base, grid)
    os.makedirs(out_dir, exist_ok=True)
    jobs = [(i, cfg, out_dir) for i, (_, cfg) in enumerate(points)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(_sweep_worker, jobs))
    else:
        summaries = [_sweep_worker(job) for job in jobs]
    keys = [k for k, _ in grid]
    header = ["run"] + keys + SWEEP_FIELDS
    rows = []
    for i, ((assign, _), summ) in enumerate(zip(points, summaries)):
        rows.append([f"run_{i:03d}"] + [assign[k] for k in keys] + [summ.get(f, "") for f in SWEEP_FIELDS])
    write_csv(os.path.join(out_dir, "summary.csv"), header, rows)
    if keys == ["n_cells"] and len(points) >= 2:
        ns = [cfg.n_cells for _, cfg in points]
        h, r = convergence_rows(ns, summaries)
        write_csv(os.path.join(out_dir, "convergence.csv"), h, r)
    return rows


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="nswave",
        description="Composite shock/rarefaction waves of barotropic Navier-Stokes: profiles, runs, checks.",
        epilog=DEFAULTS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--out", default=".", help="output directory [.]")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--baseline", action="store_true",
                        help="start from the reference perturbed configuration")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    kw = dict(parents=[common], epilog=DEFAULTS_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub.add_parser("profile", help="tabulate the viscous shock profile", **kw)
    sub.add_parser("rarefaction", help="smooth vs exact rarefaction at t_end", **kw)
    sub.add_parser("simulate", help="run the perturbed composite-wave problem", **kw)
    sub.add_parser("verify", help="run the property checks", **kw)
    sw = sub.add_parser("sweep", help="cartesian parameter sweep", **kw)
    sw.add_argument("--grid", action="append", default=[], metavar="KEY=V1,V2",
                    help="values for one key (repeatable)")
    sw.add_argument("--workers", type=int, default=1)
    return parser


def _cmd_profile(args, config):
    table = profile_table(config)
    path = os.path.join(args.out, "profile.csv")
    write_csv(path, PROFILE_HEADER, table.tolist())
    print(f"wrote {path} ({table.shape[0]} rows)")
    return EXIT_OK


def _cmd_rarefaction(args, config):
    table = rarefaction_table(config)
    path = os.path.join(args.out, "rarefaction.csv")
    write_csv(path, RAREFACTION_HEADER, table.tolist())
    gap = float(np.max(np.abs(table[:, 1] - table[:, 5])))
    print(f"wrote {path}; sup|v_R - v_exact| at t={config.t_end:g}: {gap:.6e}")
    return EXIT_OK


def _cmd_simulate(args, config):
    def progress(t):
        log.info("t = %.6g", t)

    result = run(config, progress)
    write_outputs(result, args.out)
    for key, val in result.summary.items():
        print(f"{key} = {val}")
    if result.status == "blowup":
        print(f"blow-up: {result.error}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def _cmd_verify(args, config):
    results = verify_suite(config)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _cmd_sweep(args, config):
    grid = parse_grid(args.grid)
    rows = sweep(config, grid, args.out, args.workers)
    print(f"{len(rows)} runs, summary in {os.path.join(args.out, 'summary.csv')}")
    return EXIT_OK


COMMANDS = {
    "profile": _cmd_profile,
    "rarefaction": _cmd_rarefaction,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        config = load_config(args.config, args.set, args.baseline)
        os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.command](args, config)
    except (ConfigurationError, DomainError, ProfileError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


if __name__ == "__main__":
    sys.exit(main())
