"""Compare the numba and numpy scan kernels on a search-sized workload.

    python3 benchmarks/bench_kernels.py [--rows N] [--times K] [--repeat R]
"""
import argparse
import math
import time

import numpy as np

from qslgate import _kernels
from qslgate.synthesis import family_hamiltonian_entries


def workload(rows: int, times: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    g = rng.uniform(0, 2, rows)
    m = g / 2 + rng.uniform(0, 1, rows) * (1 - g / 2)
    p1, p2 = rng.uniform(0, math.pi / 2, rows), rng.uniform(0, 2 * math.pi, rows)
    h00, h11, h01 = family_hamiltonian_entries(m - g / 2, m + g / 2, p1, p2)
    packed = np.ascontiguousarray(np.stack([h00, h11, h01.real, h01.imag], axis=1))
    return packed, np.linspace(0, 2 * math.pi, times)


def best_of(fn, repeat: int) -> float:
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=50_000)
    ap.add_argument("--times", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows, times = workload(args.rows, args.times)
    a, b = 0.0, 1.0
    thr = math.cos(math.pi / 4) + 1e-3

    cases = [("gate", lambda f: f(rows, times, 1.0, 1e-3)), ("rotation", lambda f: f(rows, times, a, b, thr))]
    print(f"rows={args.rows} times={args.times} repeat={args.repeat}")
    for name, call in cases:
        np_fn = getattr(_kernels, f"scan_{name}_numpy")
        t_np = best_of(lambda: call(np_fn), args.repeat)
        line = f"{name:9s} numpy {t_np * 1e3:9.1f} ms"
        if _kernels.HAVE_NUMBA:
            nb_fn = getattr(_kernels, f"scan_{name}_numba")
            call(nb_fn)  # compile
            t_nb = best_of(lambda: call(nb_fn), args.repeat)
            same = np.array_equal(call(np_fn), call(nb_fn))
            line += f"   numba {t_nb * 1e3:9.1f} ms   speedup {t_np / t_nb:5.1f}x   identical={same}"
        else:
            line += "   numba unavailable"
        print(line)


if __name__ == "__main__":
    main()
