"""Time the interpreted kernels against the numba-compiled ones.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload runs once per backend to warm up (and trigger compilation),
then ``--repeat`` more times; the best wall time is reported.  Both backends
must agree on every result.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from spherecolor import _kernels
from spherecolor.coloring import search_nice_coloring
from spherecolor.generators import icosahedral_subdivision
from spherecolor.isbell import fragment


def _use(backend: dict) -> None:
    for name, fn in backend.items():
        setattr(_kernels, name, fn)


def _workloads():
    big = icosahedral_subdivision(12)
    ptr, idx = _kernels.csr(big.rotation)
    rng = np.random.default_rng(0)
    a = rng.normal(size=(3000, 3))
    b = rng.normal(size=(3000, 3)) + 5.0
    chart = fragment("G_H").adjacency()
    f3 = icosahedral_subdivision(3)
    return {
        f"bfs_all_pairs (V={big.vertex_count})": lambda: _kernels.bfs_all_pairs(ptr, idx).sum(),
        "min_cross (3000 x 3000)": lambda: round(float(_kernels.min_cross(a, b)[0]), 12),
        "max_self (3000)": lambda: round(float(_kernels.max_self(a)[0]), 12),
        "colouring count (19-point chart, k=7)":
            lambda: search_nice_coloring(chart, 7, mode="enumerate", symmetry_breaking=False).count,
        "colouring unsat (f=3 sphere, k=7)":
            lambda: search_nice_coloring(f3, 7, mode="prove_unsat").status,
    }


def _best(fn, repeat: int):
    result = fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return result, min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.USE_NUMBA:
        print("numba unavailable or disabled; both columns use the interpreted kernels")
    work = _workloads()
    original = dict(_kernels.COMPILED_KERNELS)
    print(f"{'workload':44s} {'python [s]':>11s} {'numba [s]':>10s} {'speedup':>8s}")
    try:
        for name, fn in work.items():
            _use(_kernels.PYTHON_KERNELS)
            r_py, t_py = _best(fn, args.repeat)
            _use(original)
            r_jit, t_jit = _best(fn, args.repeat)
            if r_py != r_jit:
                raise SystemExit(f"{name}: backends disagree ({r_py!r} vs {r_jit!r})")
            print(f"{name:44s} {t_py:11.4f} {t_jit:10.4f} {t_py / t_jit:7.1f}x")
    finally:
        _use(original)


if __name__ == "__main__":
    main()
