from __future__ import annotations

import itertools

import numpy as np
import pytest

from qci.artranslate import ar_sequence_ending_at
from qci.decomp import (
    AbsolutelyIndecomposable,
    Decomposable,
    decompose,
    end_algebra,
    is_indecomposable,
    is_isomorphic,
    isomorphic,
)
from qci.errors import AlgebraMismatch
from qci.homology import syzygy
from qci.modrep import conjugate, direct_sum, regular_module, simple_module, socle, twist
from qci.rankvariety import principal_module

from conftest import algebra, standard_modules


def test_end_algebra_examples(A22_5, A32_7):
    for A in (A22_5, A32_7):
        k, R = simple_module(A), regular_module(A)
        E = end_algebra(k)
        assert E.dim == 1 and E.radical_dim == 0
        E = end_algebra(R)
        assert E.dim == A.dim and E.radical_dim == A.dim - 1 and E.is_local
        E = end_algebra(direct_sum(k, k))
        assert E.dim == 4 and E.semisimple_dim == 4


def test_end_algebra_closed_under_composition(A32_7):
    E = end_algebra(standard_modules(A32_7)["radA"])
    T = E.structure_constants
    assert T.shape == (E.dim, E.dim, E.dim)


def test_indecomposable_verdicts(A32_7):
    mods = standard_modules(A32_7)
    for name in ("k", "A", "radA", "AmodSoc"):
        assert isinstance(is_indecomposable(mods[name]), AbsolutelyIndecomposable), name
    assert isinstance(is_indecomposable(direct_sum(mods["k"], mods["radA"])), Decomposable)


def test_decompose_free_plus_simple(A22_5):
    k, R = simple_module(A22_5), regular_module(A22_5)
    D = decompose(direct_sum(R, k))
    assert D.verify()
    assert sorted((M.dim, m) for M, m in D.pieces()) == [(1, 1), (4, 1)]
    assert D.projective_rank() == 1
    assert D.multiplicity_of(k) == 1


def test_decompose_rad_mod_soc_exterior(A22_5):
    D = decompose(standard_modules(A22_5)["radsoc"])
    assert D.verify()
    assert D.pieces()[0][1] == 2 and D.pieces()[0][0].dim == 1


def test_decompose_ar_middle_exterior(A22_5):
    N = standard_modules(A22_5)["AmodSoc"]
    D = decompose(ar_sequence_ending_at(N).sequence.middle)
    assert D.verify()
    assert D.projective_rank() == 1
    assert D.multiplicity_of(simple_module(A22_5)) == 2


def test_decompose_is_idempotent(A32_7):
    mods = standard_modules(A32_7)
    M = direct_sum(mods["radsoc"], mods["k"], mods["radA"])
    for piece, _ in decompose(M).pieces():
        sub = decompose(piece).pieces()
        assert len(sub) == 1 and sub[0][1] == 1 and sub[0][0].dim == piece.dim


def test_krull_schmidt_across_seeds(A32_7):
    mods = standard_modules(A32_7)
    rng = np.random.default_rng(11)
    M = direct_sum(mods["k"], mods["radsoc"], mods["k"], mods["AmodSoc"])
    T = rng.integers(0, 7, (M.dim, M.dim))
    while round(np.linalg.det(T)) % 7 == 0:
        T = rng.integers(0, 7, (M.dim, M.dim))
    M = conjugate(M, T)
    runs = [decompose(M, seed=s) for s in (1, 2)]
    for D in runs:
        assert D.verify()
    a, b = runs
    assert sorted((X.dim, m) for X, m in a.pieces()) == sorted((X.dim, m) for X, m in b.pieces())
    for X, m in a.pieces():
        assert b.multiplicity_of(X) == m


def test_isomorphism_examples(A22_5, A32_7):
    for A in (A22_5, A32_7):
        k = simple_module(A)
        soc = socle(regular_module(A)).as_module()[0]
        assert isomorphic(k, soc)
        assert not isomorphic(k, regular_module(A))
        a = A.exponents[0]
        lam = [1, 2]
        Au = principal_module(A, lam, 1)[0]
        ok, w = is_isomorphic(syzygy(Au, 1), principal_module(A, lam, a - 1)[0])
        assert ok and w is not None
    with pytest.raises(AlgebraMismatch):
        is_isomorphic(simple_module(A22_5), simple_module(A32_7))


def test_isomorphism_is_an_equivalence_relation():
    A = algebra(2, 3, 7)
    mods = standard_modules(A)
    nu = A.nakayama
    base = [mods["k"], mods["radA"], mods["AmodSoc"], mods["radsoc"]]
    base += [principal_module(A, lam, s)[0] for lam in ([1, 0], [0, 1], [1, 2]) for s in (1, 2)]
    pool = list(base)
    rng = np.random.default_rng(5)
    for M in base:
        pool.append(twist(M, nu))
        T = rng.integers(0, 7, (M.dim, M.dim))
        while round(np.linalg.det(T)) % 7 == 0:
            T = rng.integers(0, 7, (M.dim, M.dim))
        pool.append(conjugate(M, T))
    assert len(pool) <= 40
    rel = {(i, j): isomorphic(pool[i], pool[j]) for i in range(len(pool)) for j in range(len(pool))}
    n = len(pool)
    for i in range(n):
        assert rel[i, i]
    for i, j in itertools.product(range(n), repeat=2):
        assert rel[i, j] == rel[j, i]
    for i, j, l in itertools.product(range(n), repeat=3):
        if rel[i, j] and rel[j, l]:
            assert rel[i, l]
    # conjugates are always isomorphic to their source
    for idx, M in enumerate(base):
        assert rel[idx, len(base) + 2 * idx + 1]
