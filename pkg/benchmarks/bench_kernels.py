"""Compiled vs numpy kernels, per call and end to end.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sweep-order 80]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from torusskein import _kernels_py as py
from torusskein.numth import cyclotomic

try:
    from torusskein import _kernels as ext
except ImportError:
    ext = None

SWEEP = ("import time; from torusskein import kernels, gauss; t=time.time(); "
         "gauss.closed_form_sweep(max_order={order}); print(kernels.BACKEND, time.time()-t)")


def kernel_cases(rng):
    for n in (60, 400, 2000):
        x = rng.integers(-9, 10, n).astype(np.int64)
        y = rng.integers(-9, 10, n).astype(np.int64)
        phi = np.array(cyclotomic(n), dtype=np.int64)
        yield f"gauss_counts n={n}", lambda m, n=n: m.gauss_counts(7, 4, 3, n)
        yield f"cyclic_mul   n={n}", lambda m, x=x, y=y: m.cyclic_mul(x, y)
        yield f"cyclo_rem    n={n}", lambda m, x=x, phi=phi: m.cyclo_rem(x, phi)


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--sweep-order", type=int, default=80)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':24s} {'python us':>10s} {'cython us':>10s} {'speedup':>8s}")
    for name, call in kernel_cases(rng):
        tp = best(lambda: call(py), args.repeat, args.number) * 1e6
        if ext is None:
            print(f"{name:24s} {tp:10.1f} {'n/a':>10s}")
            continue
        assert np.array_equal(np.asarray(call(ext)), call(py)), name
        tc = best(lambda: call(ext), args.repeat, args.number) * 1e6
        print(f"{name:24s} {tp:10.1f} {tc:10.1f} {tp / tc:8.1f}x")
    print(f"\nclosed-form sweep up to order {args.sweep_order} (fresh interpreter each):")
    for pure in ("1", ""):
        env = dict(os.environ, TORUSSKEIN_PURE=pure)
        out = subprocess.run([sys.executable, "-c", SWEEP.format(order=args.sweep_order)],
                             env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  {backend:8s} {float(secs):7.2f} s")


if __name__ == "__main__":
    main()
