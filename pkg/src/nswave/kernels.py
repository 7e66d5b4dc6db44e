"""Hot numerical kernels.

Each kernel has a numba implementation (explicit loops) and a pure-numpy
implementation. The public names at the bottom of the module point to the
numba variant unless ``NSWAVE_DISABLE_NUMBA`` is set; both variants stay
importable under ``*_numba`` / ``*_numpy`` for the benchmark and the
cross-backend tests.
"""
import math

import numpy as np

from ._jit import HAVE_NUMBA, njit

MAX_ITER = 100
NEWTON_TOL = 1e-15


# ---------------------------------------------------------------------------
# viscous shock profile ODE:  v' = -(v/sigma) [sigma^2 (v - v_m) + p(v) - p(v_m)]
# ---------------------------------------------------------------------------

def _profile_f(v, v_m, sigma, gamma):
    g = sigma * sigma * (v - v_m) + math.exp(-gamma * math.log(v)) - math.exp(-gamma * math.log(v_m))
    return -(v / sigma) * g


def _profile_march_py(v0, v_m, sigma, gamma, step, target, tol, n_max):
    out = np.empty(n_max + 1)
    out[0] = v0
    v = v0
    n = 0
    while n < n_max:
        k1 = _profile_f(v, v_m, sigma, gamma)
        k2 = _profile_f(v + 0.5 * step * k1, v_m, sigma, gamma)
        k3 = _profile_f(v + 0.5 * step * k2, v_m, sigma, gamma)
        k4 = _profile_f(v + step * k3, v_m, sigma, gamma)
        v = v + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        n += 1
        out[n] = v
        if abs(v - target) < tol:
            return out[: n + 1], True
    return out[: n + 1], False


if HAVE_NUMBA:
    _profile_f_nb = njit(_profile_f)

    @njit
    def _profile_march_nb(v0, v_m, sigma, gamma, step, target, tol, n_max):
        out = np.empty(n_max + 1)
        out[0] = v0
        v = v0
        n = 0
        while n < n_max:
            k1 = _profile_f_nb(v, v_m, sigma, gamma)
            k2 = _profile_f_nb(v + 0.5 * step * k1, v_m, sigma, gamma)
            k3 = _profile_f_nb(v + 0.5 * step * k2, v_m, sigma, gamma)
            k4 = _profile_f_nb(v + step * k3, v_m, sigma, gamma)
            v = v + step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
            n += 1
            out[n] = v
            if abs(v - target) < tol:
                return out[: n + 1], True
        return out[: n + 1], False


# ---------------------------------------------------------------------------
# cubic Hermite interpolation on a uniform table, constant extension outside
# ---------------------------------------------------------------------------

def hermite_eval_numpy(xq, x0, h, vals, ders, left, right):
    xq = np.asarray(xq, dtype=float)
    n = vals.shape[0]
    s = (xq - x0) / h
    k = np.clip(np.floor(s).astype(np.int64), 0, n - 2)
    tau = s - k
    t2 = tau * tau
    t3 = t2 * tau
    h00 = 2.0 * t3 - 3.0 * t2 + 1.0
    h10 = t3 - 2.0 * t2 + tau
    h01 = -2.0 * t3 + 3.0 * t2
    h11 = t3 - t2
    out = h00 * vals[k] + h10 * h * ders[k] + h01 * vals[k + 1] + h11 * h * ders[k + 1]
    out = np.where(s < 0.0, left, out)
    out = np.where(s > n - 1, right, out)
    return out


@njit
def hermite_eval_numba(xq, x0, h, vals, ders, left, right):
    n = vals.shape[0]
    out = np.empty(xq.shape[0])
    for i in range(xq.shape[0]):
        s = (xq[i] - x0) / h
        if s < 0.0:
            out[i] = left
            continue
        if s > n - 1:
            out[i] = right
            continue
        k = int(math.floor(s))
        if k > n - 2:
            k = n - 2
        tau = s - k
        t2 = tau * tau
        t3 = t2 * tau
        out[i] = ((2.0 * t3 - 3.0 * t2 + 1.0) * vals[k]
                  + (t3 - 2.0 * t2 + tau) * h * ders[k]
                  + (-2.0 * t3 + 3.0 * t2) * vals[k + 1]
                  + (t3 - t2) * h * ders[k + 1])
    return out


# ---------------------------------------------------------------------------
# Burgers equation with tanh data, solved along characteristics:
#   x = x0 + w0(x0) s,   w0(y) = c + d tanh(y)
# Newton on the foot x0, safeguarded by the bracket [x - (c+d)s, x - (c-d)s]:
# a step that leaves the bracket or fails to halve the previous step is
# replaced by bisection (tanh has an inflection point, plain Newton can cycle).
# ---------------------------------------------------------------------------

@njit
def _sech2(y):
    # 4 e / (1 + e)^2 with e = exp(-2|y|); 1 - tanh^2 cancels to zero for |y| > 19
    e = math.exp(-2.0 * abs(y))
    return 4.0 * e / ((1.0 + e) * (1.0 + e))


def _sech2_numpy(y):
    e = np.exp(-2.0 * np.abs(y))
    return 4.0 * e / ((1.0 + e) * (1.0 + e))


def burgers_numpy(s, x, c, d):
    x = np.asarray(x, dtype=float)
    lo = x - (c + d) * s
    hi = x - (c - d) * s
    y = np.clip(x - c * s, lo, hi)
    dx_old = hi - lo
    active = np.ones(x.shape, dtype=bool)
    for _ in range(MAX_ITER):
        th = np.tanh(y)
        f = y + (c + d * th) * s - x
        df = 1.0 + s * d * _sech2_numpy(y)
        hi = np.where(f > 0.0, y, hi)
        lo = np.where(f > 0.0, lo, y)
        step = f / df
        y_newton = y - step
        bisect = (y_newton < lo) | (y_newton > hi) | (np.abs(2.0 * step) > np.abs(dx_old))
        y_new = np.where(bisect, 0.5 * (lo + hi), y_newton)
        dx_old = np.where(active, np.where(bisect, 0.5 * (hi - lo), step), dx_old)
        done = (np.abs(y_new - y) <= NEWTON_TOL * (1.0 + np.abs(y))) | (f == 0.0)
        y = np.where(active & (f != 0.0), y_new, y)
        active &= ~done
        if not active.any():
            break
    dw = d * _sech2_numpy(y)
    return c + d * np.tanh(y), dw / (1.0 + s * dw)


@njit
def burgers_numba(s, x, c, d):
    n = x.shape[0]
    w = np.empty(n)
    wx = np.empty(n)
    for i in range(n):
        lo = x[i] - (c + d) * s
        hi = x[i] - (c - d) * s
        y = x[i] - c * s
        dx_old = hi - lo
        for _ in range(MAX_ITER):
            th = math.tanh(y)
            f = y + (c + d * th) * s - x[i]
            if f == 0.0:
                break
            if f > 0.0:
                hi = y
            else:
                lo = y
            step = f / (1.0 + s * d * _sech2(y))
            y_new = y - step
            if y_new < lo or y_new > hi or abs(2.0 * step) > abs(dx_old):
                y_new = 0.5 * (lo + hi)
                dx_old = 0.5 * (hi - lo)
            else:
                dx_old = step
            if abs(y_new - y) <= NEWTON_TOL * (1.0 + abs(y)):
                y = y_new
                break
            y = y_new
        dw = d * _sech2(y)
        w[i] = c + d * math.tanh(y)
        wx[i] = dw / (1.0 + s * dw)
    return w, wx


# ---------------------------------------------------------------------------
# Navier-Stokes right-hand side in the shock frame (interior nodes only):
#   v_t = sigma v_xi + u_xi
#   u_t = sigma u_xi - p(v)_xi + (u_xi / v)_xi
# ---------------------------------------------------------------------------

def ns_rhs_numpy(v, u, dxi, sigma, gamma):
    dv = np.zeros_like(v)
    du = np.zeros_like(u)
    p = np.exp(-gamma * np.log(v))
    inv2 = 0.5 / dxi
    vface = 0.5 * (v[1:] + v[:-1])
    flux = (u[1:] - u[:-1]) / vface
    dv[1:-1] = (sigma * (v[2:] - v[:-2]) + (u[2:] - u[:-2])) * inv2
    du[1:-1] = (sigma * (u[2:] - u[:-2]) - (p[2:] - p[:-2])) * inv2 + (flux[1:] - flux[:-1]) / (dxi * dxi)
    return dv, du


@njit
def ns_rhs_numba(v, u, dxi, sigma, gamma):
    n = v.shape[0]
    dv = np.zeros(n)
    du = np.zeros(n)
    inv2 = 0.5 / dxi
    invh2 = 1.0 / (dxi * dxi)
    p_left = math.exp(-gamma * math.log(v[0]))
    p_mid = math.exp(-gamma * math.log(v[1]))
    flux_left = (u[1] - u[0]) / (0.5 * (v[0] + v[1]))
    for i in range(1, n - 1):
        p_right = math.exp(-gamma * math.log(v[i + 1]))
        flux_right = (u[i + 1] - u[i]) / (0.5 * (v[i] + v[i + 1]))
        dv[i] = (sigma * (v[i + 1] - v[i - 1]) + (u[i + 1] - u[i - 1])) * inv2
        du[i] = (sigma * (u[i + 1] - u[i - 1]) - (p_right - p_left)) * inv2 + (flux_right - flux_left) * invh2
        p_left = p_mid
        p_mid = p_right
        flux_left = flux_right
    return dv, du


if HAVE_NUMBA:
    profile_march = _profile_march_nb
    hermite_eval = hermite_eval_numba
    burgers = burgers_numba
    ns_rhs = ns_rhs_numba
else:
    profile_march = _profile_march_py
    hermite_eval = hermite_eval_numpy
    burgers = burgers_numpy
    ns_rhs = ns_rhs_numpy
