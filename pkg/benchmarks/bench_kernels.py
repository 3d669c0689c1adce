"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from qcurv import _kernels_py, kernels, spectral


def cases():
    rng = np.random.default_rng(0)
    for rows, modes, points in ((1, 127, 256), (64, 31, 64), (128, 63, 128), (1, 1023, 2048)):
        c = rng.normal(size=(rows, 2 * modes + 1)) + 1j * rng.normal(size=(rows, 2 * modes + 1))
        t = rng.uniform(0, 2 * np.pi, points)
        yield f"trig_eval B={rows} M={modes} P={points}", "trig_eval", (c, t)
    for n in (32, 64, 128, 256):
        x, w = spectral.gauss_legendre(n)
        yield f"bary_diffmat n={n}", "bary_diffmat", (x, spectral.legendre_bary_weights(x, w))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if kernels.BACKEND != "cython":
        print("compiled extension not available; timing the fallback only")
    print(f"{'case':38s} {'numpy [ms]':>11s} {'compiled [ms]':>14s} {'speedup':>8s} {'max diff':>10s}")
    for label, name, a in cases():
        py = getattr(_kernels_py, name)
        fast = getattr(kernels, name)
        n = 3
        t_py = min(timeit.repeat(lambda: py(*a), number=n, repeat=args.repeat)) / n * 1e3
        t_c = min(timeit.repeat(lambda: fast(*a), number=n, repeat=args.repeat)) / n * 1e3
        diff = float(np.max(np.abs(py(*a) - fast(*a))))
        print(f"{label:38s} {t_py:11.3f} {t_c:14.3f} {t_py / t_c:8.2f} {diff:10.2e}")


if __name__ == "__main__":
    main()
