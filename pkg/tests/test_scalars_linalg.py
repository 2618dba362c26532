from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from qci import linalg
from qci._kernels import HAVE_NUMBA, rref_numba, rref_numpy
from qci.errors import NoSuchRoot, NotPrime
from qci.scalars import default_prime, make_field, primitive_root_of_unity

PRIMES = [2, 5, 7, 101, 103]


def test_make_field_accepts_primes_and_rejects_composites():
    assert make_field(5).p == 5
    assert make_field(7).p == 7
    with pytest.raises(NotPrime):
        make_field(6)


def test_primitive_roots():
    assert primitive_root_of_unity(make_field(5), 2) == 4
    # 2^3 = 8 = 1 mod 7 and 2, 4 != 1: smallest primitive cube root
    assert primitive_root_of_unity(make_field(7), 3) == 2
    with pytest.raises(NoSuchRoot):
        primitive_root_of_unity(make_field(5), 3)


@pytest.mark.parametrize("p,b", [(5, 4), (7, 3), (7, 6), (101, 2), (103, 3), (13, 12)])
def test_primitive_root_has_exact_order(p, b):
    F = make_field(p)
    q = primitive_root_of_unity(F, b)
    assert F.pow(q, b) == 1
    assert all(F.pow(q, m) != 1 for m in range(1, b))


def test_default_primes():
    assert default_prime(2) == 101
    assert default_prime(3) == 103


@given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=10**6))
def test_inverse_property(p, x):
    F = make_field(p)
    if x % p:
        assert F.mul(x, F.inv(x)) == 1


def _oracle_rref(a: np.ndarray, p: int):
    dm = DomainMatrix([[GF(p)(int(x)) for x in row] for row in a], a.shape, GF(p))
    r, piv = dm.rref()
    dense = np.array([[int(x) % p for x in row] for row in r.to_Matrix().tolist()], dtype=np.int64)
    return dense, list(piv)


matrices = st.tuples(
    st.sampled_from(PRIMES),
    st.integers(min_value=0, max_value=7),
    st.integers(min_value=0, max_value=7),
    st.integers(min_value=0, max_value=2**32),
)


@pytest.mark.parametrize("kernel", [rref_numpy, rref_numba], ids=["numpy", "numba"])
@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rref_matches_sympy_oracle(kernel, case):
    p, m, n, seed = case
    a = np.random.default_rng(seed).integers(0, p, size=(m, n)).astype(np.int64)
    if m and n:
        # force some rank deficiency
        a[m // 2] = a[0] * 2 % p
    r, piv = kernel(a.copy(), p)
    if m == 0 or n == 0:
        assert len(piv) == 0
        return
    want, want_piv = _oracle_rref(a, p)
    assert list(piv) == want_piv
    assert np.array_equal(r, want)


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_nullspace_and_solve(case):
    p, m, n, seed = case
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(m, n)).astype(np.int64)
    N = linalg.nullspace(a, p)
    assert N.shape == (n, n - linalg.rank(a, p))
    assert not np.any(linalg.matmul(a, N, p))
    x = rng.integers(0, p, size=n)
    b = linalg.matmul(a, x[:, None], p)[:, 0] if n else np.zeros(m, dtype=np.int64)
    sol = linalg.solve(a, b, p)
    assert sol is not None
    assert np.array_equal(linalg.matmul(a, sol.reshape(n, -1), p).reshape(-1) if n else b, b)


def test_inverse_and_singular():
    p = 7
    a = np.array([[1, 2], [3, 4]])
    inv = linalg.inverse(a, p)
    assert np.array_equal(linalg.matmul(a, inv, p), np.eye(2, dtype=np.int64))
    with pytest.raises(linalg.SingularMatrix):
        linalg.inverse(np.array([[1, 2], [2, 4]]), p)
    assert linalg.inverse(np.zeros((0, 0), dtype=np.int64), p).shape == (0, 0)


@pytest.mark.parametrize("p", [101, 2**20 - 3])
def test_matmul_exact_in_both_paths(p):
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, size=(70, 90))
    b = rng.integers(0, p, size=(90, 80))
    want = np.array([[sum(int(x) * int(y) for x, y in zip(row, col)) % p for col in b.T] for row in a])
    assert np.array_equal(linalg.matmul(a, b, p), want)


def test_numpy_backend_selected_by_env_var():
    code = (
        "from qci._kernels import backend; from qci.qalgebra import AlgebraConfig, build_algebra;"
        "from qci.homology import ext_dim; from qci.modrep import simple_module;"
        "A = build_algebra(AlgebraConfig.homogeneous(2, 2)); k = simple_module(A);"
        "print(backend(), ext_dim(k, k, 1))"
    )
    env = dict(os.environ, QCI_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "2"]


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not importable")
def test_numba_backend_is_default():
    env = {k: v for k, v in os.environ.items() if k != "QCI_DISABLE_NUMBA"}
    out = subprocess.run(
        [sys.executable, "-c", "from qci._kernels import backend; print(backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numba"
