#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Times the raw masked Dijkstra kernel and a full weak-scheme partition run
with each backend.  Usage: python3 benchmarks/bench_backends.py [--rows N]
"""

import argparse
import time

import numpy as np

from padpart import _fallback, _kernels
from padpart.corpus import GeneratorSpec, generate
from padpart.sampling import RandomStream
from padpart.weak import WeakParams, weak_random_partition

try:
    from padpart import _speedups
except ImportError:
    _speedups = None


def time_kernel(kernel, g, repeats):
    n = g.vertex_count
    mask = np.ones(n, dtype=np.uint8)
    sources = np.asarray([0], dtype=np.int32)
    best = float("inf")
    for _ in range(repeats):
        dist = np.full(n, np.inf)
        parent = np.full(n, -1, dtype=np.int32)
        t0 = time.perf_counter()
        kernel(g._indptr, g._nbr, g._wt, sources, mask, dist, parent, np.inf)
        best = min(best, time.perf_counter() - t0)
    return best, dist


def time_partition(g, repeats):
    best = float("inf")
    for t in range(repeats):
        t0 = time.perf_counter()
        weak_random_partition(g, WeakParams(8.0, 4), RandomStream(0).split(t))
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=40)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    g, _, _ = generate(
        GeneratorSpec("grid", (args.rows, args.rows)), RandomStream(1)
    )
    print(f"grid {args.rows}x{args.rows}: n={g.vertex_count} m={g.edge_count}")
    print(f"active backend: {_kernels.BACKEND}")

    py_t, py_dist = time_kernel(_fallback.dijkstra_masked, g, args.repeats)
    print(f"dijkstra  python : {py_t * 1e3:9.3f} ms")
    if _speedups is not None:
        cy_t, cy_dist = time_kernel(_speedups.dijkstra_masked, g, args.repeats)
        agree = np.array_equal(py_dist, cy_dist)
        print(f"dijkstra  cython : {cy_t * 1e3:9.3f} ms   "
              f"({py_t / cy_t:5.1f}x, outputs identical: {agree})")
    else:
        print("dijkstra  cython : extension not built")

    saved = _kernels.dijkstra_masked, _kernels.label_components
    try:
        _kernels.dijkstra_masked = _fallback.dijkstra_masked
        _kernels.label_components = _fallback.label_components
        py_p = time_partition(g, args.repeats)
        print(f"partition python : {py_p * 1e3:9.3f} ms")
        if _speedups is not None:
            _kernels.dijkstra_masked = _speedups.dijkstra_masked
            _kernels.label_components = _speedups.label_components
            cy_p = time_partition(g, args.repeats)
            print(f"partition cython : {cy_p * 1e3:9.3f} ms   "
                  f"({py_p / cy_p:5.1f}x)")
    finally:
        _kernels.dijkstra_masked, _kernels.label_components = saved


if __name__ == "__main__":
    main()
