"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are checked for identical output before timing. The numba
column excludes compilation (one warm-up call per kernel).
"""

import argparse
import itertools
import time

import numpy as np

from toricex import _accel
from toricex.cohomology import _fiber_context, _particular, homology_patterns
from toricex.fan import FamilyParams, build_family_fan
from toricex.frobenius import chart_classes
from toricex.kernels import fiber_search


def fibre_workload(fan, radius):
    ctx = _fiber_context(fan)
    jobs = []
    for cls in itertools.product(range(-4, 5), range(-2, 3), range(-2, 3)):
        r0 = _particular(fan, cls)
        for I in homology_patterns(fan):
            nonneg = np.zeros(fan.num_rays, dtype=bool)
            nonneg[list(I)] = True
            jobs.append((r0, np.where(nonneg, 0, -radius), np.where(nonneg, radius, -1)))

    def run(backend):
        return [fiber_search(r0, ctx.W, lo, hi, ctx.sigma, radius, backend=backend).count for r0, lo, hi in jobs]

    return run, len(jobs)


def frobenius_workload(fan, p):
    def run(backend):
        return chart_classes(fan, p, backend=backend)

    return run, p ** fan.dimension


def best_of(fn, backend, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(backend)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    cases = [
        ("fibre n=3 b=1 R=8", *fibre_workload(build_family_fan(FamilyParams(3, 1)), 8)),
        ("fibre n=5 b=2 R=11", *fibre_workload(build_family_fan(FamilyParams(5, 2)), 11)),
        ("frobenius n=3 b=2 p=11", *frobenius_workload(build_family_fan(FamilyParams(3, 2)), 11)),
        ("frobenius n=5 b=1 p=7", *frobenius_workload(build_family_fan(FamilyParams(5, 1)), 7)),
    ]
    print(f"{'workload':26} {'items':>7} {'numba s':>9} {'numpy s':>9} {'ratio':>7}")
    for name, fn, size in cases:
        a, b = fn("numba"), fn("numpy")
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, list) else np.array_equal(a, b)
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        tn = best_of(fn, "numba", args.repeat)
        tp = best_of(fn, "numpy", args.repeat)
        print(f"{name:26} {size:>7} {tn:>9.4f} {tp:>9.4f} {tp / tn:>6.1f}x")


if __name__ == "__main__":
    main()
