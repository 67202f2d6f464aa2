"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--size 30] [--repeat 5]

Inputs are grid diagrams and the filling search over Z^2; both backends get
the same data and their outputs are checked for equality before timing.
"""

from __future__ import annotations

import argparse
import timeit

from vankampen import _pykernels
from vankampen.gallery import grid

try:
    from vankampen import _kernels
except ImportError:
    _kernels = None


def cases(size: int):
    d = grid(size, size)
    indptr, indices = d.csr
    n = d.vertex_count
    sigma, twin = list(d.sigma), list(d.twin)
    phi = list(d.phi)
    small = grid(size // 3 or 1, size // 3 or 1)
    sp, si = small.csr
    return {
        "bfs_levels": lambda k: k.bfs_levels(indptr, indices, n, 0),
        "all_pairs_max": lambda k: k.all_pairs_max(sp, si, small.vertex_count),
        "perm_orbits": lambda k: k.perm_orbits(phi),
        "canonical_order": lambda k: k.canonical_order(sigma, twin, 0),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=30)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':<16} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for name, fn in cases(args.size).items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if _kernels is None:
            print(f"{name:<16} {py:12.3f} {'-':>12} {'-':>8}")
            continue
        if fn(_pykernels) != fn(_kernels):
            raise SystemExit(f"{name}: backends disagree")
        cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16} {py:12.3f} {cy:12.3f} {py / cy:8.1f}x")


if __name__ == "__main__":
    main()
