"""Hot numeric loops with a compiled fast path.

The grid scan over the four-dimensional rule cube is the only genuinely hot
loop in the package (10^8 evaluations at the default resolution).  When numba
is importable we JIT it; setting ``ARTIFACT_DISABLE_NUMBA=1`` (or any value
other than ``0``/empty) forces the vectorized numpy fallback instead.  Both
paths evaluate the objective with the same operation order, so they return
bit-identical maxima and pick the same (first, lexicographic) argmax.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = ["USING_NUMBA", "grid_scan"]

_DISABLED = os.environ.get("ARTIFACT_DISABLE_NUMBA", "") not in ("", "0")

try:
    if _DISABLED:
        raise ImportError("numba disabled by ARTIFACT_DISABLE_NUMBA")
    from numba import njit

    USING_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    njit = None
    USING_NUMBA = False


def _grid_scan_py(r_a: float, r_b: float, m: int):
    """Maximize the closed-form success probability over an m^4 lattice.

    Returns (best value, i_pa, i_pb, i_qa, i_qb) with each index in [0, m)
    mapping to the grid point index/(m-1).  Ties keep the lexicographically
    first index vector in (p_A, p_B, q_A, q_B) order.
    """
    step = 1.0 / (m - 1)
    best = -1.0
    bi = bj = bk = bl = 0
    for i in range(m):
        pa = i * step
        for j in range(m):
            pb = j * step
            base = 1.0 - pa * pb
            for k in range(m):
                qa = k * step
                ca = r_a * (pa + qa)
                cb = r_b * (pa - qa)
                for l in range(m):
                    qb = l * step
                    v = 0.5 * (ca * (pb - qb) + cb * (pb + qb) + base + qa * qb)
                    if v > best:
                        best = v
                        bi, bj, bk, bl = i, j, k, l
    return best, bi, bj, bk, bl


def _grid_scan_numpy(r_a: float, r_b: float, m: int):
    """Same scan, sliced along the p_A axis to bound memory.

    The inner arithmetic mirrors _grid_scan_py term by term (same order of
    additions) so the float results match the scalar loop exactly; np.argmax
    on the C-ordered block picks the first maximum, i.e. the lexicographic
    one within each slice.
    """
    step = 1.0 / (m - 1)
    g = np.arange(m, dtype=np.float64) * step
    pb = g[:, None, None]
    qa = g[None, :, None]
    qb = g[None, None, :]
    best = -1.0
    bi = bj = bk = bl = 0
    for i in range(m):
        pa = g[i]
        base = 1.0 - pa * pb
        ca = r_a * (pa + qa)
        cb = r_b * (pa - qa)
        v = 0.5 * (ca * (pb - qb) + cb * (pb + qb) + base + qa * qb)
        flat = int(np.argmax(v))
        top = float(v.flat[flat])
        if top > best:
            best = top
            bj, rem = divmod(flat, m * m)
            bk, bl = divmod(rem, m)
            bi = i
    return best, bi, bj, bk, bl


if USING_NUMBA:
    _grid_scan_jit = njit(cache=True)(_grid_scan_py)

    def grid_scan(r_a: float, r_b: float, m: int):
        return _grid_scan_jit(float(r_a), float(r_b), int(m))

else:
    grid_scan = _grid_scan_numpy
