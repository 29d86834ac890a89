"""Time the compiled and pure-Python transitive-closure kernels on random relations.

    python3 benchmarks/bench_closure.py --sizes 128 256 512 --density 0.01 --repeat 3
"""

import argparse
import time

import numpy as np

from lambdamu import _closure_py
from lambdamu.oracle import DeclarativeOracle, close_universe, types_up_to

try:
    from lambdamu import _kernels
except ImportError:
    _kernels = None


def best_of(fn, arg, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(arg)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[128, 256, 512, 1024])
    p.add_argument("--density", type=float, default=0.01)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oracle-size", type=int, default=7, help="also time the oracle fixpoint at this type size")
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        rel = rng.random((n, n)) < args.density
        tp, outp = best_of(_closure_py.transitive_closure, rel, args.repeat)
        if _kernels is None:
            print(f"{n:>6} {tp:>10.4f} {'n/a':>10} {'n/a':>8}")
            continue
        tc, outc = best_of(_kernels.transitive_closure, rel, args.repeat)
        assert np.array_equal(outp, outc), "backends disagree"
        print(f"{n:>6} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")

    if args.oracle_size:
        import lambdamu.oracle as oracle_mod

        universe = close_universe(types_up_to(args.oracle_size))
        for name, fn in [("python", _closure_py.transitive_closure),
                         ("cython", _kernels.transitive_closure if _kernels else None)]:
            if fn is None:
                continue
            oracle_mod.transitive_closure = fn
            t0 = time.perf_counter()
            o = DeclarativeOracle(universe)
            print(f"oracle size<={args.oracle_size} ({len(universe)} types, {o.rounds} rounds) "
                  f"with {name}: {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
