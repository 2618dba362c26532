"""Row-reduction kernels over F_p.

Two interchangeable implementations of in-place reduced row echelon form:
a numba ``@njit`` loop and a vectorised numpy path. The numba path is used
when numba imports cleanly and ``QCI_DISABLE_NUMBA`` is unset or ``0``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("QCI_DISABLE_NUMBA", "0") in ("", "0")


def rref_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduce ``a`` (int64, entries in [0, p)) in place; return (a, pivots)."""
    m, n = a.shape
    pivots = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, col])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r, col:] = (a[r, col:] * inv) % p
        f = a[:, col].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            a[rows, col:] = (a[rows, col:] + (p - f[rows, None]) * a[r, col:]) % p
        pivots.append(col)
        r += 1
    return a, np.asarray(pivots, dtype=np.int64)


if HAVE_NUMBA:

    @njit(cache=True)
    def _modinv(x, p):
        t, newt = 0, 1
        r, newr = p, x % p
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def _rref_jit(a, p):
        m, n = a.shape
        pivots = np.empty(min(m, n), dtype=np.int64)
        r = 0
        for col in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if a[i, col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(col, n):
                    tmp = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = tmp
            inv = _modinv(a[r, col], p)
            for j in range(col, n):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(m):
                if i == r:
                    continue
                f = a[i, col]
                if f == 0:
                    continue
                g = p - f
                for j in range(col, n):
                    if a[r, j] != 0:
                        a[i, j] = (a[i, j] + g * a[r, j]) % p
            pivots[r] = col
            r += 1
        return a, pivots[:r].copy()

    def rref_numba(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        return _rref_jit(a, np.int64(p))

else:  # pragma: no cover
    rref_numba = rref_numpy


def rref_inplace(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    if USE_NUMBA:
        return rref_numba(a, p)
    return rref_numpy(a, p)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
