"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each row is the best of ``--repeat`` runs after one warm-up call.
"""
import argparse
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

import corpus  # noqa: E402
from maniplex import automorphisms, catalog, kernels, mix, pip_check  # noqa: E402


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads():
    a, b = corpus.cell24(), corpus.cubic_toroid(3)
    big = mix(a, b).mix
    c = big.connections
    tree = kernels.bfs_tree(c, 0)
    t = catalog.torus_44(4, 4)
    return [
        ("components [0,1,2] (746k flags)", lambda: kernels.components(c, [0, 1, 2])),
        ("bfs_tree (746k flags)", lambda: kernels.bfs_tree(c, 0)),
        ("extend x64 (746k flags)", lambda: kernels.extend(c, tree, c, np.arange(64))),
        ("mix cell24 x toroid(3)", lambda: kernels.mix(a.connections, b.connections, 0, 0)),
        ("parity (746k flags)", lambda: kernels.parity(c, np.ones(4, dtype=np.int8), 0)),
        ("automorphisms (746k flags)", lambda: automorphisms(big)),
        ("pip_check torus_44(4,4)", lambda: pip_check(t)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if len(kernels.BACKENDS) < 2:
        sys.exit("numba is not importable; nothing to compare")
    jobs = workloads()
    rows = []
    for name, fn in jobs:
        res = {}
        for backend in ("numba", "numpy"):
            kernels.use_backend(backend)
            res[backend] = best_of(fn, args.repeat)
        rows.append((name, res["numba"], res["numpy"]))
    kernels.use_backend("numba")
    print(f"{'workload':36s} {'numba s':>9s} {'numpy s':>9s} {'speedup':>8s}")
    for name, nb, npy in rows:
        print(f"{name:36s} {nb:9.4f} {npy:9.4f} {npy / nb:8.1f}x")


if __name__ == "__main__":
    main()
