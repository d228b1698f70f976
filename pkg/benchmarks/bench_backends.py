"""Time the compiled kernel against the pure-Python path (and the quadratic-time DP).

Usage::

    python benchmarks/bench_backends.py              # default sizes
    python benchmarks/bench_backends.py --n 1000 10000 --k-max 10 --repeat 3

Every timing is the median of ``--repeat`` runs.  Both pruned backends must
produce bit-identical tables; the script exits non-zero otherwise.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from prunedseg import classical_dp, pruned_dp
from prunedseg.pruned import available_backends
from prunedseg.simulate import SignalSpec, simulate

PYTHON_LIMIT = 20_000
CLASSICAL_LIMIT = 5_000


def median_ms(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1000, 5000, 20000, 100000])
    ap.add_argument("--k-max", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--shape", default="rectangular")
    args = ap.parse_args(argv)

    if "compiled" not in available_backends():
        print("compiled kernel not built; run `pip install -e .` first", file=sys.stderr)
        return 1
    print(f"{'n':>8} {'compiled ms':>12} {'python ms':>12} {'speedup':>8} {'classical ms':>13}")
    status = 0
    for n in args.n:
        y = simulate(SignalSpec(args.shape, n, 1.0, 10.0, 0.0, "gaussian", n))
        fast_ms, fast = median_ms(lambda: pruned_dp(y, "quadratic", args.k_max,
                                                    backend="compiled"), args.repeat)
        slow_ms = classical_ms = float("nan")
        if n <= PYTHON_LIMIT:
            slow_ms, slow = median_ms(lambda: pruned_dp(y, "quadratic", args.k_max,
                                                        backend="python"), args.repeat)
            if not (np.array_equal(fast.cost, slow.cost)
                    and np.array_equal(fast.backpointer, slow.backpointer)):
                print(f"backends disagree at n={n}", file=sys.stderr)
                status = 1
        if n <= CLASSICAL_LIMIT:
            classical_ms, _ = median_ms(lambda: classical_dp(y, "quadratic", args.k_max),
                                        args.repeat)
        print(f"{n:>8} {fast_ms:>12.1f} {slow_ms:>12.1f} {slow_ms / fast_ms:>8.1f} "
              f"{classical_ms:>13.1f}")
    return status


if __name__ == "__main__":
    sys.exit(main())
