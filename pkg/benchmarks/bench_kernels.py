"""Benchmark the compiled Gray-code kernels against the pure-Python twins.

Run from the repository root:

    python benchmarks/bench_kernels.py [--dims 14,16,18,20]

Each row times one exact affine-minimum scan (the inner loop behind subspace
distances and cosystoles) and one ratio scan (the expansion constant) on the
same random instance through both implementations, checks that the results
agree bit for bit, and reports the speedup.
"""

from __future__ import annotations

import argparse
import time

from permstab.kernels import IMPLEMENTATION, reference

try:
    from permstab.kernels import _fast
except ImportError:
    _fast = None

from permstab.rng import SplitMix64


def affine_instance(rng, dim, ncells):
    rows = [rng.next_uint64() & ((1 << ncells) - 1) for _ in range(dim)]
    start = rng.next_uint64() & ((1 << ncells) - 1)
    weights = [1 + rng.below(50) for _ in range(ncells)]
    return start, rows, weights


def ratio_instance(rng, nlo, nu, nz, nhi):
    from permstab import gf2

    rows = []
    while len(rows) < nu + nz:
        cand = rng.next_uint64() & ((1 << nlo) - 1)
        if cand and gf2.rank(rows + [cand]) == len(rows) + 1:
            rows.append(cand)
    ui = [rng.next_uint64() & ((1 << nhi) - 1) for _ in range(nu)]
    wlo = [1 + rng.below(20) for _ in range(nlo)]
    whi = [1 + rng.below(20) for _ in range(nhi)]
    return rows[:nu], ui, rows[nu:], wlo, whi


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--dims", default="12,14,16,18")
    parser.add_argument("--cells", type=int, default=120)
    args = parser.parse_args()
    dims = [int(t) for t in args.dims.split(",")]

    print(f"active implementation: {IMPLEMENTATION}")
    if _fast is None:
        print("compiled kernels not built; timing the reference implementation only")

    rng = SplitMix64(0xBE9C)
    print(f"\n{'scan':<14} {'size':<12} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for dim in dims:
        start, rows, weights = affine_instance(rng, dim, args.cells)
        ref, t_py = timed(reference.min_affine_weight, start, rows, weights)
        if _fast is not None:
            fast, t_c = timed(_fast.min_affine_weight, start, rows, weights)
            assert fast == ref, "implementations disagree"
            print(f"{'affine-min':<14} {f'2^{dim}':<12} {t_py:>9.3f}s {t_c:>9.3f}s {t_py / t_c:>8.1f}x")
        else:
            print(f"{'affine-min':<14} {f'2^{dim}':<12} {t_py:>9.3f}s {'-':>10} {'-':>9}")

    for nlo, nu, nz in [(12, 6, 6), (16, 8, 8), (18, 9, 9)]:
        u, ui, z, wlo, whi = ratio_instance(rng, nlo, nu, nz, 60)
        ref, t_py = timed(reference.min_ratio_scan, u, ui, z, wlo, whi)
        label = f"2^{nu}x2^{nz}"
        if _fast is not None:
            fast, t_c = timed(_fast.min_ratio_scan, u, ui, z, wlo, whi)
            assert fast == ref, "implementations disagree"
            print(f"{'ratio-scan':<14} {label:<12} {t_py:>9.3f}s {t_c:>9.3f}s {t_py / t_c:>8.1f}x")
        else:
            print(f"{'ratio-scan':<14} {label:<12} {t_py:>9.3f}s {'-':>10} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
