"""Time the numba kernels against the numpy fallback, and one full solver iteration.

    python benchmarks/bench_kernels.py [--n 64] [--repeat 20]

The pointwise kernels are where numba helps; a solver iteration is dominated by
FFTs, so the end-to-end gain is small.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from choquard import _kernels as K


def best(fn, repeat):
    fn()  # warm-up, includes JIT compilation
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernels(n, repeat):
    rng = np.random.default_rng(0)
    u = rng.standard_normal((n, n, n))
    pot = rng.uniform(0.5, 2.0, u.shape)
    rows = []
    for name, a, b in (
        ("abs_pow", lambda: K.abs_pow_numpy(u, 2.5), lambda: K.abs_pow_numba(u, 2.5)),
        ("odd_pow", lambda: K.odd_pow_numpy(u, 2.5), lambda: K.odd_pow_numba(u, 2.5)),
        ("coupling_force", lambda: K.coupling_force_numpy(pot, u, 2.5, 0.8), lambda: K.coupling_force_numba(pot, u, 2.5, 0.8)),
        ("rk4_radial(2000)", lambda: K.rk4_radial_numpy(1.0, 1.2, 1e-4, 2e-3, 2000), lambda: K.rk4_radial_numba(1.0, 1.2, 1e-4, 2e-3, 2000)),
    ):
        rows.append((name, best(a, repeat), best(b, repeat)))
    return rows


ITER_SNIPPET = """
import timeit
from choquard import *
from choquard.energy import Evaluation
from choquard.solver import symmetric_init
prob = make_problem(GridSpec(3, {n}, 16.0), 2.0, 2.0, 2.4)
pair = symmetric_init(prob.grid, 1.5)
Evaluation(prob, pair)
print(min(timeit.repeat(lambda: Evaluation(prob, pair), number=1, repeat={repeat})))
"""


def evaluation_time(n, repeat, disable):
    env = dict(os.environ, CHOQUARD_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run(
        [sys.executable, "-c", ITER_SNIPPET.format(n=n, repeat=repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    print(f"grid {args.n}^3, best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, t_np, t_nb in kernels(args.n, args.repeat):
        print(f"{name:<20}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}")
    t_np = evaluation_time(args.n, args.repeat, disable=True)
    t_nb = evaluation_time(args.n, args.repeat, disable=False)
    print(f"{'full evaluation':<20}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
