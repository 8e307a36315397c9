"""Compare the compiled kernels with the pure-Python fallback.

Each workload runs once per backend on identical inputs; the answers are
checked for equality before the timings are printed.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeat 3 --only separator cover
"""

import argparse
import time
from itertools import combinations

import numpy as np

from bilist import kernels
from bilist.choosability import threshold_a
from bilist.kernels import mask_of
from bilist.steiner import fano_complements, mbar_exact


def _random_masks(rng, count, k, palette):
    return [mask_of(int(x) for x in rng.choice(palette, size=k, replace=False)) for _ in range(count)]


def wl_separator():
    rng = np.random.default_rng(1)
    queries = []
    for _ in range(300):
        queries.append((_random_masks(rng, 30, 3, 10), _random_masks(rng, 7, 4, 10), 10))
    return lambda: [kernels.separator(a, b, n) is None for a, b, n in queries]


def wl_transversals():
    rng = np.random.default_rng(2)
    fams = [_random_masks(rng, 7, 4, 14) for _ in range(40)] + [list(fano_complements().blocks)]
    return lambda: [sorted(kernels.minimal_transversals(f)) for f in fams]


def wl_cover():
    tr = kernels.minimal_transversals(list(fano_complements().blocks))
    return lambda: len(kernels.cover(tr, 3, len(tr)))


def wl_canonical():
    rng = np.random.default_rng(3)
    fams = [_random_masks(rng, 6, 3, 9) for _ in range(200)]
    return lambda: [kernels.canonical_family(f)[0] for f in fams]


def wl_mbar():
    return lambda: [mbar_exact(*p).value for p in ((2, 4, 7), (3, 3, 7), (2, 3, 7), (4, 3, 8))]


def wl_threshold():
    return lambda: [threshold_a(*p).a_star for p in ((3, 2, 3), (4, 3, 2), (3, 3, 2), (4, 3, 3), (3, 3, 3))]


WORKLOADS = {
    "separator": wl_separator,
    "transversals": wl_transversals,
    "cover": wl_cover,
    "canonical": wl_canonical,
    "mbar": wl_mbar,
    "threshold": wl_threshold,
}


def timed(fn, repeat):
    best = None
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1, help="runs per backend, best time is kept")
    ap.add_argument("--only", nargs="*", choices=sorted(WORKLOADS), help="subset of workloads")
    args = ap.parse_args(argv)

    compiled = kernels._c
    if compiled is None:
        print("compiled kernels are not built; only the Python timings are shown")
    names = args.only or list(WORKLOADS)
    print(f"{'workload':<14}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for name in names:
        fn = WORKLOADS[name]()
        tc, outc = (None, None)
        if compiled is not None:
            kernels._c = compiled
            tc, outc = timed(fn, args.repeat)
        kernels._c = None
        try:
            tp, outp = timed(fn, args.repeat)
        finally:
            kernels._c = compiled
        if compiled is not None and outc != outp:
            raise SystemExit(f"{name}: backends disagree")
        sc = f"{tc:12.4f}" if tc is not None else f"{'-':>12}"
        sp = f"{tp / tc:9.1f}x" if tc else f"{'-':>10}"
        print(f"{name:<14}{sc}{tp:12.4f}{sp}")


if __name__ == "__main__":
    main()
