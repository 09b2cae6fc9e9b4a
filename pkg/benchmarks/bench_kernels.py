"""Time each kernel on the numba loop backend and on the numpy backend.

    python benchmarks/bench_kernels.py [--dim 2] [--repeat 5]

The numba column excludes compilation (every kernel is called once first).
A final row times a full 20x20 Bose-gas scan through the active backend.
"""

import argparse
import itertools
import math
import timeit

import numpy as np

from frobgeom import kernels
from frobgeom._accel import NUMBA_AVAILABLE
from frobgeom.analysis import ScanGrid, scan
from frobgeom.kernels import loops, vectorized
from frobgeom.models import bose_ideal_gas


def _inputs(n, rng):
    a = rng.standard_normal((n, n))
    g = a @ a.T + n * np.eye(n)
    t3 = rng.standard_normal((n,) * 3)
    C = sum(t3.transpose(p) for p in itertools.permutations(range(3))) / 6
    t4 = rng.standard_normal((n,) * 4)
    Q = sum(t4.transpose(p) for p in itertools.permutations(range(4))) / 24
    return {
        "g_inv": np.linalg.inv(g),
        "C": C,
        "Q": Q,
        "gamma": rng.standard_normal((n,) * 3),
        "dgamma": rng.standard_normal((n,) * 4),
        "v": rng.standard_normal(n),
        "V": rng.standard_normal(n),
    }


def _calls(d):
    return {
        "polylog_series (eta=0.5)": lambda m: m.polylog_series(1.5, math.log(0.5), 10**8, 1e-17),
        "polylog_series (eta=1-1e-4)": lambda m: m.polylog_series(0.5, math.log1p(-1e-4), 10**8, 1e-17),
        "raise_last": lambda m: m.raise_last(d["g_inv"], d["C"]),
        "raise_last_derivative": lambda m: m.raise_last_derivative(d["g_inv"], d["C"], d["C"], d["Q"]),
        "christoffel_first_kind": lambda m: m.christoffel_first_kind(d["C"], d["Q"]),
        "riemann": lambda m: m.riemann(d["gamma"], d["dgamma"]),
        "yukawa_parts": lambda m: m.yukawa_parts(d["g_inv"], d["C"]),
        "wdvv_defect": lambda m: m.wdvv_defect(d["g_inv"], d["C"]),
        "transport_rhs": lambda m: m.transport_rhs(d["gamma"], d["v"], d["V"]),
    }


def _best(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    d = _inputs(args.dim, np.random.default_rng(0))
    print(f"dimension {args.dim}; numba available: {NUMBA_AVAILABLE}; active backend: {kernels.BACKEND}")
    print(f"{'kernel':<30} {'numba [us]':>12} {'numpy [us]':>12} {'speedup':>9}")
    for name, call in _calls(d).items():
        t_np = _best(lambda: call(vectorized), args.repeat)
        if NUMBA_AVAILABLE:
            call(loops)
            t_nb = _best(lambda: call(loops), args.repeat)
            print(f"{name:<30} {t_nb * 1e6:12.2f} {t_np * 1e6:12.2f} {t_np / t_nb:9.1f}")
        else:
            print(f"{name:<30} {'-':>12} {t_np * 1e6:12.2f} {'-':>9}")

    model = bose_ideal_gas()
    grid = ScanGrid.from_specs(["beta=0.5:2:20", "gamma=0.1:3:20"], ("beta", "gamma"))
    scan(model, ScanGrid.from_specs(["beta=1", "gamma=1"], ("beta", "gamma")))
    t = _best(lambda: scan(model, grid), 3)
    print(f"\n20x20 Bose scan via {kernels.BACKEND} backend: {t:.3f} s")


if __name__ == "__main__":
    main()
