"""Rank varieties, Jordan types over k[u_lambda], principal and induced modules."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BlockOutOfRange, NotDivisible, ZeroPoint
from .modrep import ModuleMap, ModuleRep, cyclic_module, regular_module, submodule_generated
from .qalgebra import Algebra
from .seeding import rng_for


def _point(algebra: Algebra, lam) -> np.ndarray:
    v = np.asarray(lam, dtype=np.int64).reshape(-1) % algebra.p
    if v.size != algebra.c:
        raise ValueError(f"a point needs {algebra.c} coordinates")
    return v


def u_element(algebra: Algebra, lam) -> np.ndarray:
    """u = lam_1 x_1 + ... + lam_c x_c as an algebra element."""
    v = algebra.zero()
    v[algebra.generators] = _point(algebra, lam)
    return v


def u_action(M: ModuleRep, lam) -> np.ndarray:
    lam = _point(M.algebra, lam)
    U = np.zeros((M.dim, M.dim), dtype=np.int64)
    for s, x in zip(lam, M.actions):
        U = (U + int(s) * x) % M.p
    return U


def nilpotency_index(algebra: Algebra, lam) -> int:
    """Least n with u^n = 0 in A, i.e. the dimension of k[u]."""
    lam = _point(algebra, lam)
    if not lam.any():
        raise ZeroPoint("u_0 = 0 generates the trivial subalgebra")
    U = u_action(regular_module(algebra), lam)
    n, P = 1, U
    while np.any(P):
        P = linalg.matmul(P, U, algebra.p)
        n += 1
    return n


@dataclass(frozen=True)
class JordanType:
    """multiplicities[i - 1] = number of Jordan blocks of size i, for i = 1..a."""

    multiplicities: tuple[int, ...]

    @property
    def a(self) -> int:
        return len(self.multiplicities)

    @property
    def dim(self) -> int:
        return sum((i + 1) * n for i, n in enumerate(self.multiplicities))

    def blocks(self) -> list[int]:
        out = []
        for i in range(self.a, 0, -1):
            out += [i] * self.multiplicities[i - 1]
        return out

    def is_free(self) -> bool:
        return not any(self.multiplicities[:-1])

    def __add__(self, other: "JordanType") -> "JordanType":
        if self.a != other.a:
            raise ValueError("Jordan types over different truncations")
        return JordanType(tuple(x + y for x, y in zip(self.multiplicities, other.multiplicities)))

    def to_dict(self) -> dict:
        return {str(i + 1): n for i, n in enumerate(self.multiplicities)}


def jordan_type(M: ModuleRep, lam) -> JordanType:
    lam = _point(M.algebra, lam)
    if not lam.any():
        raise ZeroPoint("Jordan type needs a nonzero point")
    a = nilpotency_index(M.algebra, lam)
    p = M.p
    U = u_action(M, lam)
    ranks = [M.dim]
    P = np.eye(M.dim, dtype=np.int64)
    for _ in range(a + 1):
        P = linalg.matmul(P, U, p)
        ranks.append(linalg.rank(P, p))
    mult = tuple(ranks[i - 1] - 2 * ranks[i] + ranks[i + 1] for i in range(1, a + 1))
    jt = JordanType(mult)
    if jt.dim != M.dim or min(mult) < 0:  # pragma: no cover - rank profile is always consistent
        raise ArithmeticError("inconsistent rank profile")
    return jt


restrict_to_point = jordan_type


def rank_variety_contains(M: ModuleRep, lam) -> bool:
    """True iff M restricted to k[u_lam] is not free (always true at lam = 0)."""
    lam = _point(M.algebra, lam)
    if not lam.any():
        return True
    a = nilpotency_index(M.algebra, lam)
    r = linalg.rank(u_action(M, lam), M.p)
    by_rank = a * r < (a - 1) * M.dim
    by_blocks = not jordan_type(M, lam).is_free()
    if by_rank != by_blocks:
        raise NotDivisible(f"rank test and block test disagree (rank {r}, dim {M.dim}, a {a})")
    return by_rank


def principal_module(algebra: Algebra, lam, s: int = 1) -> tuple[ModuleRep, ModuleMap]:
    """The left ideal A u^s as a module, with its inclusion into A."""
    lam = _point(algebra, lam)
    if not lam.any():
        raise ZeroPoint("principal module needs a nonzero point")
    a = nilpotency_index(algebra, lam)
    if not 1 <= s <= a - 1:
        raise BlockOutOfRange(f"s must lie in 1..{a - 1}")
    u = u_element(algebra, lam)
    us = algebra.power(u, s)
    return submodule_generated(regular_module(algebra), us[:, None]).as_module()


def induce_from_point(algebra: Algebra, lam, i: int) -> ModuleRep:
    """A tensored over k[u] with k[u]/(u^i), presented as A / A u^i."""
    lam = _point(algebra, lam)
    if not lam.any():
        raise ZeroPoint("induction needs a nonzero point")
    a = nilpotency_index(algebra, lam)
    if not 1 <= i <= a:
        raise BlockOutOfRange(f"block size must lie in 1..{a}")
    if i == a:
        return regular_module(algebra)
    return cyclic_module(algebra, [algebra.power(u_element(algebra, lam), i)])


def truncated_ext1_count(jt: JordanType, i: int = 1) -> int:
    """dim Ext^1 over k[u]/(u^a) from M_i into a module of the given Jordan type."""
    a = jt.a
    return sum(n * min(i, j, a - i, a - j) for j, n in enumerate(jt.multiplicities, start=1))


def projective_line(p: int) -> list[tuple[int, int]]:
    return [(1, t) for t in range(p)] + [(0, 1)]


def normalize_point(lam, p: int) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1."""
    v = [int(x) % p for x in lam]
    for x in v:
        if x:
            inv = pow(x, -1, p)
            return tuple(y * inv % p for y in v)
    return tuple(v)


def probe_variety(M: ModuleRep, strategy: str = "auto", *, samples: int = 64, seed: int = 0) -> dict:
    """Membership scan over directions with a scaling sanity check."""
    A = M.algebra
    p = M.p
    rng = rng_for(seed, "probe", M.content_hash)
    if strategy == "auto":
        strategy = "line_scan_c2" if A.c == 2 else "random"
    if strategy == "line_scan_c2":
        if A.c != 2:
            raise ValueError("line scan needs c = 2")
        points = projective_line(p)
    elif strategy == "random":
        points = []
        while len(points) < samples:
            lam = rng.integers(0, p, size=A.c)
            if lam.any():
                points.append(normalize_point(lam, p))
        points = sorted(set(points))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    members, jts = [], {}
    homogeneous = True
    for lam in points:
        inside = rank_variety_contains(M, lam)
        if inside:
            members.append(list(lam))
        jts[",".join(map(str, lam))] = jordan_type(M, lam).to_dict()
        t = int(rng.integers(2, p)) if p > 2 else 1
        if rank_variety_contains(M, [t * x % p for x in lam]) != inside:
            homogeneous = False
    return {
        "module": M.content_hash,
        "strategy": strategy,
        "directions": len(points),
        "members": members,
        "jordan_types": jts,
        "homogeneous": homogeneous,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"))
