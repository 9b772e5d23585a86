"""Compare the JIT grid scan against the numpy fallback.

Run as a script:

    python3 benchmarks/bench_kernels.py

Both paths must return bit-identical (value, argmax) tuples; the script
asserts that before printing timings, so a silent numeric drift between the
compiled and vectorized kernels shows up here as a hard failure rather than
as a benchmark number.
"""

import time

from artifact._kernels import (
    USING_NUMBA,
    _grid_scan_numpy,
    _grid_scan_py,
    grid_scan,
)


def _time(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"numba available: {USING_NUMBA}")

    # correctness first, on a grid small enough for the pure-python loop
    for r_a, r_b in ((0.7, 0.6), (0.9, 0.55), (1.0, 1.0)):
        ref = _grid_scan_py(r_a, r_b, 21)
        assert grid_scan(r_a, r_b, 21) == ref, (r_a, r_b)
        assert _grid_scan_numpy(r_a, r_b, 21) == ref, (r_a, r_b)
    print("correctness: all three kernels agree exactly at m=21")

    if USING_NUMBA:
        grid_scan(0.7, 0.6, 11)  # compile outside the timed region

    print(f"{'m':>6} {'lattice':>14} {'grid_scan':>12} {'numpy':>12} {'speedup':>8}")
    for m in (51, 101, 201):
        t_fast, out_fast = _time(grid_scan, 0.7, 0.6, m)
        t_np, out_np = _time(_grid_scan_numpy, 0.7, 0.6, m)
        assert out_fast == out_np, m
        print(
            f"{m:>6} {m**4:>14,} {t_fast:>11.4f}s {t_np:>11.4f}s "
            f"{t_np / t_fast:>7.1f}x"
        )


if __name__ == "__main__":
    main()
