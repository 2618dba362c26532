from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qci.decomp import isomorphic
from qci.errors import BlockOutOfRange, ZeroPoint
from qci.homology import ext_dim
from qci.modrep import cyclic_module, direct_sum, regular_module, simple_module
from qci.rankvariety import (
    JordanType,
    induce_from_point,
    jordan_type,
    nilpotency_index,
    normalize_point,
    principal_module,
    probe_variety,
    projective_line,
    rank_variety_contains,
    report_json,
    truncated_ext1_count,
    u_element,
)

from conftest import algebra, standard_modules


@pytest.mark.parametrize("shape", [(2, 2, 5), (2, 3, 7), (3, 2, 5)])
def test_u_is_nilpotent_of_index_a(shape):
    A = algebra(*shape)
    a = A.exponents[0]
    rng = np.random.default_rng(0)
    for _ in range(10):
        lam = rng.integers(0, A.p, A.c)
        if not lam.any():
            continue
        u = u_element(A, lam)
        assert not np.any(A.power(u, a))
        assert nilpotency_index(A, lam) == a
    with pytest.raises(ZeroPoint):
        nilpotency_index(A, [0] * A.c)


def test_jordan_types_of_basic_modules(A32_7):
    lam = [1, 2]
    assert jordan_type(regular_module(A32_7), lam) == JordanType((0, 0, 3))
    assert jordan_type(simple_module(A32_7), lam) == JordanType((1, 0, 0))
    assert jordan_type(regular_module(A32_7), lam).is_free()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_jordan_type_is_additive(seed):
    A = algebra(2, 3, 7)
    mods = list(standard_modules(A).values())
    rng = np.random.default_rng(seed)
    M, N = (mods[i] for i in rng.integers(0, len(mods), 2))
    lam = rng.integers(0, 7, 2)
    if not lam.any():
        lam[0] = 1
    assert jordan_type(direct_sum(M, N), lam) == jordan_type(M, lam) + jordan_type(N, lam)


@pytest.mark.parametrize("shape", [(2, 2, 5), (2, 3, 7)])
def test_probe_free_and_simple(shape):
    A = algebra(*shape)
    rep = probe_variety(regular_module(A))
    assert rep["members"] == [] and rep["homogeneous"]
    rep = probe_variety(simple_module(A))
    assert len(rep["members"]) == A.p + 1 == rep["directions"]


def test_probe_principal_module_exterior(A22_5):
    Au = principal_module(A22_5, [1, 2], 1)[0]
    rep = probe_variety(Au)
    assert rep["members"] == [[1, 2]]


def test_probe_principal_module_a3(A32_7):
    """At a = 3 the variety of A u_lam also holds the line through (lam_1, q lam_2), q = q_12."""
    q = A32_7.config.commutation[0][1]
    for lam in ([1, 2], [1, 1], [1, 5]):
        Au = principal_module(A32_7, lam, 1)[0]
        members = {tuple(m) for m in probe_variety(Au)["members"]}
        assert members == {tuple(lam), normalize_point([lam[0], q * lam[1] % 7], 7)}
    for lam in ([1, 0], [0, 1]):
        assert probe_variety(principal_module(A32_7, lam, 1)[0])["members"] == [lam]


def test_probe_random_strategy(A23):
    rep = probe_variety(simple_module(A23), "random", samples=16, seed=0)
    assert rep["strategy"] == "random"
    assert len(rep["members"]) == rep["directions"]
    assert report_json(rep) == report_json(probe_variety(simple_module(A23), "random", samples=16, seed=0))


@pytest.mark.parametrize("shape", [(2, 2, 5), (2, 3, 7), (3, 2, 5)])
def test_induce_dimensions(shape):
    A = algebra(*shape)
    a = A.exponents[0]
    lam = [1, 2] + [0] * (A.c - 2)
    for i in range(1, a + 1):
        assert induce_from_point(A, lam, i).dim == i * a ** (A.c - 1)
    assert isomorphic(induce_from_point(A, lam, a), regular_module(A))
    with pytest.raises(BlockOutOfRange):
        induce_from_point(A, lam, a + 1)


def test_induce_one_is_principal_at_a2(A22_5, A23):
    for A in (A22_5, A23):
        lam = [1, 2] + [0] * (A.c - 2)
        assert isomorphic(induce_from_point(A, lam, 1), principal_module(A, lam, 1)[0])


@pytest.mark.parametrize("shape", [(2, 2, 5), (2, 3, 7), (3, 2, 5)])
def test_principal_module_dimension(shape):
    """dim A u^s = (a - s) a^(c-1)."""
    A = algebra(*shape)
    a = A.exponents[0]
    lam = [1, 2] + [0] * (A.c - 2)
    for s in range(1, a):
        assert principal_module(A, lam, s)[0].dim == (a - s) * a ** (A.c - 1)
    with pytest.raises(BlockOutOfRange):
        principal_module(A, lam, a)


@pytest.mark.parametrize("shape", [(2, 2, 5), (2, 3, 7)])
def test_eckmann_shapiro(shape):
    A = algebra(*shape)
    rng = np.random.default_rng(2)
    lam = [1, 2]
    M1 = induce_from_point(A, lam, 1)
    for _ in range(6):
        rels = [rng.integers(0, A.p, A.dim) * (rng.random(A.dim) < 0.4) for _ in range(2)]
        L = cyclic_module(A, rels)
        if L.dim == 0:
            continue
        assert ext_dim(M1, L, 1) == truncated_ext1_count(jordan_type(L, lam), 1)


def test_point_helpers():
    assert normalize_point([3, 6], 7) == (1, 2)
    assert len(projective_line(5)) == 6
    assert rank_variety_contains(simple_module(algebra(2, 2, 5)), [0, 0])
