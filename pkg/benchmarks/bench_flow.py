"""Compare the numba and numpy RK4 kernels on the Lax flow.

    python benchmarks/bench_flow.py [--steps N] [--repeat R]

Both backends integrate the same starting points; the script reports the
best wall time per backend, the speedup and the largest difference between
final states.
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from mumford_strata import _kernels
from mumford_strata.mumford import random_regular


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--dt", type=float, default=1e-4)
    args = ap.parse_args(argv)

    if _kernels.numba is None:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = random.Random(0)
    print(f"{'g':>3} {'i':>3} {'numpy [s]':>11} {'numba [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for g in (1, 2, 3, 4):
        a = random_regular(g, rng, spread=1)
        z0 = np.array([complex(c) for c in a.coordinates()], dtype=np.complex128)
        i = g - 1
        # compile outside the timed region
        _kernels.rk4_numba(z0, g, i, args.dt, 1)
        zn, _, _ = _kernels.rk4_numpy(z0, g, i, args.dt, args.steps)
        zb, _, _ = _kernels.rk4_numba(z0, g, i, args.dt, args.steps)
        t_np = best_time(lambda: _kernels.rk4_numpy(z0, g, i, args.dt, args.steps), args.repeat)
        t_nb = best_time(lambda: _kernels.rk4_numba(z0, g, i, args.dt, args.steps), args.repeat)
        diff = float(np.max(np.abs(zn - zb)))
        print(f"{g:>3} {i:>3} {t_np:>11.4f} {t_nb:>11.4f} {t_np / t_nb:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
