"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the three hot loops (RK4 endpoint used by the shooting bracket, full
RK4 trajectory, tridiagonal solve) and one end-to-end call each of
``shoot`` and ``maximize`` under both backends.  End-to-end runs switch
backends by patching ``opial_lab.kernels``.
"""

import argparse
import timeit
from contextlib import contextmanager

import numpy as np

from opial_lab import _kernels_py, emdenfowler, kernels, variational

try:
    from opial_lab import _kernels as _compiled
except ImportError:
    _compiled = None


@contextmanager
def backend(module):
    saved = {name: getattr(kernels, name) for name in ("rk4_emden", "rk4_endpoint", "thomas_solve")}
    try:
        for name in saved:
            setattr(kernels, name, getattr(module, name))
        yield
    finally:
        for name, fn in saved.items():
            setattr(kernels, name, fn)


def cases(mod):
    n = 2047
    off = -np.ones(n - 1)
    diag = 2.0 * np.ones(n)
    rhs = np.random.default_rng(0).random(n)
    return {
        "rk4_endpoint n=4000": lambda: mod.rk4_endpoint(3.0, 1.0, 13.2, 1.0, 4000),
        "rk4_emden n=4000": lambda: mod.rk4_emden(3.0, 1.0, 13.2, 1.0, 4000),
        "thomas_solve n=2047": lambda: mod.thomas_solve(off, diag, off, rhs),
    }


def end_to_end():
    return {
        "shoot p=3": lambda: emdenfowler.shoot(3.0, 1.0, 1.0),
        "maximize p=3 n=2048": lambda: variational.maximize(3.0, 1.0, n=2048),
    }


def best(fn, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(fn, number=1), 1e-6)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _compiled is None:
        print("compiled extension not built; only the fallback can be timed")
    print(f"{'case':<24}{'python [ms]':>14}{'cython [ms]':>14}{'speed-up':>10}")
    rows = []
    pure_cases = cases(_kernels_py)
    fast_cases = cases(_compiled) if _compiled else {}
    for name, fn in pure_cases.items():
        rows.append((name, best(fn, args.repeat), fast_cases and best(fast_cases[name], args.repeat)))
    for name, fn in end_to_end().items():
        with backend(_kernels_py):
            slow = best(fn, max(1, args.repeat // 2))
        fast = None
        if _compiled:
            with backend(_compiled):
                fast = best(fn, args.repeat)
        rows.append((name, slow, fast))
    for name, slow, fast in rows:
        if fast:
            print(f"{name:<24}{slow * 1e3:>14.3f}{fast * 1e3:>14.3f}{slow / fast:>9.1f}x")
        else:
            print(f"{name:<24}{slow * 1e3:>14.3f}{'-':>14}{'-':>10}")


if __name__ == "__main__":
    main()
