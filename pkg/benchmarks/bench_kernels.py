"""Time the compiled kernels against the NumPy fallback.

Run with ``python benchmarks/bench_kernels.py``; each line reports the best
of several repeats and the speed-up of the compiled backend. Both backends
are also checked to agree before timing.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from blm import kernels
from blm.families import block_basu, freund
from blm.dependence import Grid, survival_kernel


def _cases(n_points: int, grid: int):
    mix = freund(1.0, 1.0, 2.0, 2.0).F.expoly()
    bb = block_basu(1.0, 2.0, 0.5).F.expoly()
    t = np.linspace(0.0, 20.0, n_points)
    u = np.random.default_rng(0).uniform(1e-9, 1.0, n_points)
    d = block_basu(1.0, 1.0, 1.0)
    K = survival_kernel(d).matrix(Grid.geometric(d.theta, grid))
    return [
        ("expoly_eval (Erlang mix)", "expoly_eval", (*mix, t)),
        ("expoly_isf (Erlang mix)", "expoly_isf", (*mix, u, 0.0)),
        ("expoly_isf (signed mix)", "expoly_isf", (*bb, u, 0.0)),
        (f"tp2_scan ({grid}x{grid})", "tp2_scan", (K, 1.0)),
    ]


def _agree(name, a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    for x, y in zip(a, b):
        if not np.allclose(np.asarray(x, float), np.asarray(y, float), rtol=1e-10, atol=1e-14):
            raise SystemExit(f"{name}: backends disagree")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--grid", type=int, default=60)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not available; timing the NumPy backend only")
    print(f"{'kernel':28s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for label, name, call in _cases(args.points, args.grid):
        py = getattr(kernels.python, name)
        t_py = min(timeit.repeat(lambda: py(*call), number=1, repeat=args.repeat)) * 1e3
        if kernels.compiled is None:
            print(f"{label:28s} {t_py:12.3f} {'-':>12s} {'-':>9s}")
            continue
        cy = getattr(kernels.compiled, name)
        _agree(label, py(*call), cy(*call))
        t_cy = min(timeit.repeat(lambda: cy(*call), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:28s} {t_py:12.3f} {t_cy:12.3f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
