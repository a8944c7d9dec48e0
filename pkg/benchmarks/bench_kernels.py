"""Compare the compiled kernel backend against the pure-Python reference.

Runs the two hot loads (irreducible enumeration and per-degree Euler blocks)
on the rank-2 q=2 module and prints timings plus the speedup.  Both backends
must produce identical output; a mismatch aborts the run.

Usage: python benchmarks/bench_kernels.py [max_degree]
"""

import sys
import time

from tmotive import _kernels_py as py
from tmotive.sigma import SigmaModule

try:
    from tmotive import _kernels as c
except ImportError:
    c = None


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main():
    max_degree = int(sys.argv[1]) if len(sys.argv) > 1 else 16
    if c is None:
        print("compiled backend not available; build the extension first")
        return 1

    M = SigmaModule.drinfeld(2, ["1", "1"]).dual_twist()
    num, den, r, st = M.packed()
    W = 18

    print(f"{'load':<28}{'python':>10}{'compiled':>10}{'speedup':>9}")
    for d in range(max_degree - 3, max_degree + 1):
        ep, tp = timed(py.irreducibles, 2, d)
        ec, tc = timed(c.irreducibles2, d)
        assert ep == ec, f"irreducible mismatch at degree {d}"
        print(f"{'irreducibles d=' + str(d):<28}{tp:>9.3f}s{tc:>9.3f}s{tp / tc:>8.1f}x")

        bp, tp = timed(py.partial_product, 2, d, ep, num, den, r, st, 1, W)
        bc, tc = timed(c.partial_product2, d, ec, num, den, r, st, 1, W)
        assert bp == bc, f"block mismatch at degree {d}"
        print(f"{'euler block d=' + str(d):<28}{tp:>9.3f}s{tc:>9.3f}s{tp / tc:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
