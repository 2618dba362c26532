"""Exact dense linear algebra over F_p on int64 numpy arrays.

All functions take and return arrays with entries in ``[0, p)``. Vectors
live in columns unless a function says otherwise.
"""
from __future__ import annotations

import numpy as np

from ._kernels import rref_inplace

# float64 BLAS is exact while every partial sum stays below 2**53
_FLOAT_EXACT = 2**53
# below this many multiply-adds the int64 loop beats the float round trip
_SMALL_PRODUCT = 4096
# entry budget for intermediates that callers build in chunks
CHUNK_ENTRIES = 1 << 22


class SingularMatrix(ArithmeticError):
    pass


def asmod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    k = a.shape[-1]
    if k == 0:
        return np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
    if k * (p - 1) ** 2 < _FLOAT_EXACT and a.size * b.shape[-1] > _SMALL_PRODUCT:
        # casting back before reducing: float remainder is far slower than int %
        c = np.matmul(a.astype(np.float64), b.astype(np.float64))
        out = c.astype(np.int64)
        del c
    else:
        out = np.matmul(a, b)
    np.remainder(out, p, out=out)
    return out


def matpow(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a
    while e:
        if e & 1:
            result = matmul(result, base, p)
        e >>= 1
        if e:
            base = matmul(base, base, p)
    return result


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of a copy of ``a`` and its pivot columns."""
    work = np.array(a, dtype=np.int64, copy=True, order="C")
    if work.size == 0:
        return work, np.zeros(0, dtype=np.int64)
    r, piv = rref_inplace(work, p)
    return r[: len(piv)], piv


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    # reduce along the shorter side
    work = a if a.shape[0] <= a.shape[1] else a.T
    return len(rref(work, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (columns) of {x : a x = 0}.

    Basis vector ``j`` is the identity on the j-th free column, so the free
    rows of the result form an identity block.
    """
    m, n = a.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = np.setdiff1d(np.arange(n), piv)
    basis = np.zeros((n, free.size), dtype=np.int64)
    basis[free, np.arange(free.size)] = 1
    if piv.size and free.size:
        basis[piv, :] = (-r[:, free]) % p
    return basis


def free_columns(n: int, pivots: np.ndarray) -> np.ndarray:
    return np.setdiff1d(np.arange(n), pivots)


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """A particular solution of ``a x = b`` (free variables zero) or None."""
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    m, n = a.shape
    aug = np.concatenate([a, bb], axis=1)
    r, piv = rref(aug, p)
    if piv.size and piv[-1] >= n:
        return None
    x = np.zeros((n, bb.shape[1]), dtype=np.int64)
    x[piv, :] = r[:, n:]
    return x[:, 0] if vec else x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise SingularMatrix("non-square matrix")
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1)
    r, piv = rref(aug, p)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularMatrix("matrix is singular mod %d" % p)
    return r[:, n:]


def column_pivots(a: np.ndarray, p: int) -> np.ndarray:
    """Indices of the leftmost maximal independent set of columns."""
    if a.size == 0:
        return np.zeros(0, dtype=np.int64)
    return rref(a, p)[1]


def span_columns(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis of the column span: RREF rows of ``a.T``, transposed."""
    n = a.shape[0]
    if a.size == 0:
        return np.zeros((n, 0), dtype=np.int64)
    r, _ = rref(a.T, p)
    return np.ascontiguousarray(r.T)


def reduce_rows(v: np.ndarray, r: np.ndarray, piv: np.ndarray, p: int) -> np.ndarray:
    """Normal form of the rows of ``v`` modulo the row space of RREF ``r``."""
    if piv.size == 0:
        return v % p
    return (v - matmul(v[:, piv], r, p)) % p


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a)


def is_nilpotent(a: np.ndarray, p: int) -> bool:
    n = a.shape[0]
    if n == 0:
        return True
    e = 1
    while e < n:
        e *= 2
    return is_zero(matpow(a, e, p))


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        t = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank(t, p) == n:
            return t
