"""Compare the numba and pure-numpy series kernels.

    python3 benchmarks/bench_kernels.py [--batch 2048] [--order 64] [--repeat 5]

Part one times each kernel directly.  Part two times one coefficient
audit cell end to end in a subprocess per backend, since the backend is
fixed at import time by SALAGEAN_DISABLE_NUMBA.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from salagean import _kernels as K

CELL = (
    "import time; from salagean import BACKEND; from salagean.classes import ClassParams;"
    "from salagean.fuzz import empirical_max;"
    "empirical_max(ClassParams(0.5, 0.25, 2), 'a4', 200, 0);"
    "t = time.perf_counter(); empirical_max(ClassParams(0.5, 0.25, 2), 'a4', {trials}, 1);"
    "print(BACKEND, time.perf_counter() - t)"
)


def series_batch(rng, batch, order):
    r = 0.3 * np.sqrt(rng.random((batch, order + 1)))
    g = r * np.exp(2j * np.pi * rng.random((batch, order + 1)))
    g[:, 0] = 1.0
    return g


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_table(batch, order, repeat):
    rng = np.random.default_rng(0)
    a, b = series_batch(rng, batch, order), series_batch(rng, batch, order)
    z = 0.9 * np.exp(1j * np.linspace(0, 2 * np.pi, 256, endpoint=False))
    cases = {
        "cauchy": ((K.np_cauchy, K.nb_cauchy if K.HAVE_NUMBA else None), (a, b)),
        "power": ((K.np_power, K.nb_power if K.HAVE_NUMBA else None), (a, 0.37)),
        "reciprocal": ((K.np_reciprocal, K.nb_reciprocal if K.HAVE_NUMBA else None), (a,)),
        "polyval": ((K.np_polyval, K.nb_polyval if K.HAVE_NUMBA else None), (a, z)),
    }
    print(f"kernels: batch={batch} order={order} best of {repeat}")
    print(f"{'kernel':<12}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, ((np_fn, nb_fn), args) in cases.items():
        t_np = best_of(lambda: np_fn(*args), repeat)
        if nb_fn is None:
            print(f"{name:<12}{t_np * 1e3:>12.2f}{'n/a':>12}{'':>10}")
            continue
        nb_fn(*args)  # compile outside the timing
        t_nb = best_of(lambda: nb_fn(*args), repeat)
        np.testing.assert_allclose(nb_fn(*args), np_fn(*args), rtol=1e-9, atol=1e-12)
        print(f"{name:<12}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}x")


def cell_table(trials):
    print(f"\naudit cell (a4, {trials} trials + hill-climb):")
    for disabled in ("0", "1"):
        env = dict(os.environ, SALAGEAN_DISABLE_NUMBA=disabled)
        out = subprocess.run([sys.executable, "-c", CELL.format(trials=trials)], env=env, capture_output=True, text=True, check=True)
        backend, seconds = out.stdout.split()
        print(f"  {backend:<8}{float(seconds):.3f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=2048)
    ap.add_argument("--order", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--trials", type=int, default=10_000)
    args = ap.parse_args()
    kernel_table(args.batch, args.order, args.repeat)
    cell_table(args.trials)


if __name__ == "__main__":
    main()
