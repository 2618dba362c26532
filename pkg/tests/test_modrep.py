from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qci.errors import AlgebraMismatch, CommutationViolated, NotInvariant, RelationViolated
from qci.modrep import (
    ModuleMap,
    ModuleRep,
    Submodule,
    check_module,
    conjugate,
    cyclic_module,
    direct_sum,
    dual,
    free_module,
    module_from_json,
    quotient,
    radical,
    regular_module,
    simple_module,
    socle,
    submodule_generated,
    top_generators,
    twist,
    zero_module,
)

from conftest import algebra, standard_modules

NIL = [[0, 1], [0, 0]]


def test_nilpotent_pair_is_a_module_for_exterior(A22_5):
    M = check_module(A22_5, [NIL, NIL])
    assert M.dim == 2
    # q12 = -1 requires X1 X2 = -X2 X1; both products vanish here
    assert radical(M).dim == 1 and socle(M).dim == 1


def test_relations_are_enforced(A22_5, A32_7):
    with pytest.raises(RelationViolated):
        check_module(A22_5, [np.eye(2), np.zeros((2, 2))])
    X = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    check_module(A32_7, [X, np.zeros((3, 3))])
    with pytest.raises(CommutationViolated):
        check_module(A32_7, [X, X])


def test_regular_and_free_modules(A32_7):
    R = regular_module(A32_7)
    assert R.dim == 9
    assert radical(R).dim == 8 and socle(R).dim == 1
    F = free_module(A32_7, 2)
    assert F.dim == 18 and socle(F).dim == 2
    assert zero_module(A32_7).dim == 0


@pytest.mark.parametrize("shape", [(2, 2, 5), (2, 3, 7), (3, 2, 5)])
def test_standard_modules_dims(shape):
    A = algebra(*shape)
    mods = standard_modules(A)
    n = A.dim
    assert mods["k"].dim == 1
    assert mods["radA"].dim == n - 1
    assert mods["AmodSoc"].dim == n - 1
    assert mods["radsoc"].dim == n - 2
    for M in mods.values():
        check_module(A, M.actions)


def test_top_generators_generate(A32_7):
    for M in standard_modules(A32_7).values():
        G = top_generators(M)
        assert G.shape[1] == M.dim - radical(M).dim
        assert submodule_generated(M, G).dim == M.dim


def test_quotient_map_is_surjective_homomorphism(A32_7):
    R = regular_module(A32_7)
    Q, pi = quotient(R, radical(R))
    assert Q.dim == 1 and pi.is_intertwiner() and pi.is_surjective()
    assert pi.kernel().dim == radical(R).dim


def test_quotient_rejects_non_submodule(A22_5):
    R = regular_module(A22_5)
    v = np.zeros((4, 1), dtype=np.int64)
    v[1, 0] = 1
    with pytest.raises(NotInvariant):
        quotient(R, Submodule(R, v, check=False))


def test_submodule_inclusion(A22_5):
    R = regular_module(A22_5)
    S = socle(R)
    N, inc = S.as_module()
    assert N.dim == 1 and inc.is_injective() and inc.is_intertwiner()


def test_direct_sum_and_mismatch(A22_5, A32_7):
    k = simple_module(A22_5)
    S = direct_sum(k, regular_module(A22_5), k)
    assert S.dim == 6 and socle(S).dim == 3
    with pytest.raises(AlgebraMismatch):
        direct_sum(k, simple_module(A32_7))


def test_twist_exterior_negates_actions(A22_5):
    R = regular_module(A22_5)
    T = twist(R, A22_5.nakayama)
    for x, y in zip(R.actions, T.actions):
        assert np.array_equal(y, (-x) % 5)
    check_module(A22_5, T.actions)


def test_twist_by_identity_and_composition(A32_7):
    M = standard_modules(A32_7)["radsoc"]
    nu = A32_7.nakayama
    assert twist(M, nu.power(3)).content_hash == M.content_hash
    assert twist(twist(M, nu), nu.inverse()).content_hash == M.content_hash


def test_dual_lives_over_opposite(A32_7):
    M = standard_modules(A32_7)["radA"]
    D = dual(M)
    assert D.algebra == A32_7.opposite
    check_module(D.algebra, D.actions)
    assert socle(D).dim == M.dim - radical(M).dim


def test_json_round_trip(A32_7):
    M = standard_modules(A32_7)["AmodSoc"]
    N = module_from_json(M.to_json())
    assert N.content_hash == M.content_hash
    assert module_from_json(M.to_json(), A32_7).algebra is A32_7


def test_cyclic_module(A22_5):
    x2 = A22_5.generator(1)
    x1 = A22_5.generator(0)
    M = cyclic_module(A22_5, [x2])
    assert M.dim == 2
    assert cyclic_module(A22_5, [x1, x2]).dim == 1
    assert cyclic_module(A22_5, []).dim == 4


def test_module_map_validation(A22_5):
    k = simple_module(A22_5)
    R = regular_module(A22_5)
    soc = np.zeros((4, 1), dtype=np.int64)
    soc[R.algebra.top, 0] = 1
    f = ModuleMap(k, R, soc)
    assert f.is_injective() and f.rank == 1
    bad = np.zeros((4, 1), dtype=np.int64)
    bad[0, 0] = 1
    assert not ModuleMap(k, R, bad, check=False).is_intertwiner()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_conjugation_preserves_invariants(seed):
    A = algebra(2, 3, 7)
    M = standard_modules(A)["radsoc"]
    rng = np.random.default_rng(seed)
    while True:
        T = rng.integers(0, 7, (M.dim, M.dim))
        if round(np.linalg.det(T)) % 7:
            break
    N = conjugate(M, T)
    check_module(A, N.actions)
    assert N.canonical_key == M.canonical_key
    assert ModuleMap(M, N, T).is_intertwiner()


def test_action_of_algebra_elements(A32_7):
    R = regular_module(A32_7)
    rng = np.random.default_rng(3)
    u, v = rng.integers(0, 7, 9), rng.integers(0, 7, 9)
    assert np.array_equal(R.act(u) @ v % 7, A32_7.multiply(u, v))
    assert isinstance(R, ModuleRep)
