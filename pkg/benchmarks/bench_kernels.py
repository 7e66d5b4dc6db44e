"""Time the numba kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py --n 4096 --repeat 20
"""
import argparse
import statistics
import time

import numpy as np

from nswave import kernels
from nswave._jit import HAVE_NUMBA
from nswave.euler_waves import WaveConfig


def timeit(fn, repeat):
    fn()  # warm-up (triggers compilation for numba)
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def cases(n):
    cfg = WaveConfig.from_states(5.0 / 3.0, 1.0, 0.0, 0.9, 0.8)
    rng = np.random.default_rng(0)
    v = 1.0 + 0.05 * rng.random(n)
    u = 0.05 * rng.standard_normal(n)
    x = np.linspace(-300.0, 50.0, n)
    grid = np.linspace(-1.0, 1.0, 2001)
    vals, ders = np.sin(grid), np.cos(grid)
    xq = np.linspace(-1.2, 1.2, n)
    march = (0.95, cfg.v_m, cfg.sigma, cfg.gamma, cfg.delta_S / 50, cfg.v_plus, 1e-10, 100_000)
    return {
        "ns_rhs": (lambda: kernels.ns_rhs_numba(v, u, 0.1, 1.38, 5 / 3),
                   lambda: kernels.ns_rhs_numpy(v, u, 0.1, 1.38, 5 / 3)),
        "burgers": (lambda: kernels.burgers_numba(51.0, x, -1.62, 0.13),
                    lambda: kernels.burgers_numpy(51.0, x, -1.62, 0.13)),
        "hermite": (lambda: kernels.hermite_eval_numba(xq, -1.0, 0.001, vals, ders, 0.0, 1.0),
                    lambda: kernels.hermite_eval_numpy(xq, -1.0, 0.001, vals, ders, 0.0, 1.0)),
        "profile_march": (lambda: kernels.profile_march(*march),
                          lambda: kernels._profile_march_py(*march)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=4096, help="grid size [4096]")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba unavailable or disabled: both columns time the numpy/python code")
    print(f"{'kernel':<15}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, (fast, slow) in cases(args.n).items():
        rep = 3 if name == "profile_march" else args.repeat
        t_fast = timeit(fast, rep)
        t_slow = timeit(slow, rep)
        print(f"{name:<15}{1e3 * t_fast:>12.3f}{1e3 * t_slow:>12.3f}{t_slow / t_fast:>10.1f}")


if __name__ == "__main__":
    main()
