"""Time the numba and numpy orbit kernels on the same inputs.

    python3 benchmarks/bench_orbits.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from ringgroups.orbits import FiniteRingEnum, HAVE_NUMBA, enum_um, generator_matrices
from ringgroups.orbits.kernels import orbit_labels
from ringgroups.orbits.table import _index_stack
from ringgroups.rings import parse_ring

CASES = [("z6", 3, "linear"), ("z9", 3, "linear"), ("fp5", 4, "linear"), ("z6", 4, "symplectic"), ("z8", 4, "linear")]


def bench(ring_text, n, family, backend, repeat):
    fr = FiniteRingEnum(parse_ring(ring_text))
    gens = _index_stack(fr, generator_matrices(fr, n, family), n)
    start = [fr.encode(r) for r in enum_um(n, fr)]
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = orbit_labels(start, gens, fr.add, fr.mul, fr.q, n, fr.zero, backend)
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    if HAVE_NUMBA:
        bench("z4", 2, "linear", "numba", 1)  # compile once outside the timings
    print(f"{'ring':8} {'n':>2} {'family':11} {'rows':>7} " + " ".join(f"{b:>10}" for b in backends))
    for ring_text, n, family in CASES:
        times, results = [], []
        for b in backends:
            t, res = bench(ring_text, n, family, b, args.repeat)
            times.append(t)
            results.append(res)
        for codes, labels in results[1:]:
            assert np.array_equal(codes, results[0][0]) and np.array_equal(labels, results[0][1])
        rows = len(results[0][0])
        print(f"{ring_text:8} {n:>2} {family:11} {rows:>7} " + " ".join(f"{t:>9.4f}s" for t in times))


if __name__ == "__main__":
    main()
