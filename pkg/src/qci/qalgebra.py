"""Quantum complete intersections k<x_1..x_c>/(x_i^{a_i}, x_i x_j - q_ij x_j x_i).

The algebra is materialised on its monomial basis x^e = x_1^{e_1} ... x_c^{e_c}
(0 <= e_i < a_i) in graded-lexicographic order, so the identity is basis
index 0 and the top monomial is the last index.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from math import gcd, prod

import numpy as np

from . import linalg
from .errors import BadCommutationMatrix, ConfigError, DegenerateForm, NotAutomorphism, NotDiagonal
from .scalars import Field, default_prime, make_field, primitive_root_of_unity, root_order


@dataclass(frozen=True)
class AlgebraConfig:
    field: Field
    exponents: tuple[int, ...]
    commutation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        c = len(self.exponents)
        if c < 2:
            raise ConfigError("need at least two generators")
        if any(a < 2 for a in self.exponents):
            raise ConfigError("exponents must be >= 2")
        if len(self.commutation) != c or any(len(r) != c for r in self.commutation):
            raise ConfigError("commutation matrix must be c x c")
        p = self.field.p
        q = self.commutation
        for i in range(c):
            if q[i][i] % p != 1:
                raise BadCommutationMatrix(f"q_{i + 1}{i + 1} = {q[i][i]} != 1")
            for j in range(i + 1, c):
                if (q[i][j] * q[j][i]) % p != 1:
                    raise BadCommutationMatrix(
                        f"q_{i + 1}{j + 1} q_{j + 1}{i + 1} = {q[i][j]}*{q[j][i]} != 1 mod {p}"
                    )

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def c(self) -> int:
        return len(self.exponents)

    @property
    def is_homogeneous(self) -> bool:
        """All a_i equal and every q_ij (i < j) one fixed primitive b-th root."""
        a = self.exponents[0]
        if any(x != a for x in self.exponents):
            return False
        upper = {self.commutation[i][j] for i in range(self.c) for j in range(i + 1, self.c)}
        if len(upper) != 1:
            return False
        (q,) = upper
        return self.field.order(q) == root_order(a, self.p)

    @classmethod
    def homogeneous(cls, c: int, a: int, p: int | None = None, b: int | None = None):
        if p is None:
            p = default_prime(a if b is None else b)
        fld = make_field(p)
        if b is None:
            b = root_order(a, p)
        q = primitive_root_of_unity(fld, b)
        qi = fld.inv(q)
        mat = tuple(
            tuple(1 if i == j else (q if i < j else qi) for j in range(c)) for i in range(c)
        )
        return cls(fld, (a,) * c, mat)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "c": self.c,
            "exponents": list(self.exponents),
            "commutation": [list(r) for r in self.commutation],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AlgebraConfig":
        try:
            if "commutation" in d:
                c = int(d["c"])
                cfg = cls(
                    make_field(int(d["p"])),
                    tuple(int(x) for x in d["exponents"]),
                    tuple(tuple(int(x) % int(d["p"]) for x in r) for r in d["commutation"]),
                )
                if cfg.c != c:
                    raise ConfigError(f"c = {c} but {cfg.c} exponents given")
                return cfg
            return cls.homogeneous(
                int(d["c"]),
                int(d["a"]),
                None if d.get("p") is None else int(d["p"]),
                None if d.get("root_order") is None else int(d["root_order"]),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "AlgebraConfig":
        return cls.from_dict(json.loads(text))


def _grlex_basis(exponents: tuple[int, ...]) -> list[tuple[int, ...]]:
    vecs = np.indices(exponents).reshape(len(exponents), -1).T
    basis = [tuple(int(x) for x in v) for v in vecs]
    basis.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return basis


def left_generator_move(config: AlgebraConfig, i: int, e: tuple[int, ...]):
    """x_i * x^e as (scalar, exponent) by commuting x_i past x_1..x_{i-1}; None if zero."""
    if e[i] + 1 >= config.exponents[i]:
        return None
    p = config.p
    s = 1
    for j in range(i):
        s = s * pow(config.commutation[i][j], e[j], p) % p
    out = list(e)
    out[i] += 1
    return s, tuple(out)


def generator_word_product(config: AlgebraConfig, e, f):
    """x^e * x^f by repeated single-generator left moves; None if zero."""
    s, cur = 1, tuple(f)
    for i in reversed(range(config.c)):
        for _ in range(e[i]):
            r = left_generator_move(config, i, cur)
            if r is None:
                return None
            s = s * r[0] % config.p
            cur = r[1]
    return s, cur


class Algebra:
    """A materialised quantum complete intersection. Immutable after build."""

    def __init__(self, config: AlgebraConfig, *, verify: bool = True):
        self.config = config
        self.p = config.p
        self.c = config.c
        self.exponents = config.exponents
        self.basis = _grlex_basis(config.exponents)
        self.dim = len(self.basis)
        self.index = {e: k for k, e in enumerate(self.basis)}
        self.top = self.dim - 1
        self.generators = [self.index[tuple(int(i == j) for j in range(self.c))] for i in range(self.c)]
        self._build_structure()
        if verify and self.dim <= 64:
            self._verify_against_moves()

    def _build_structure(self):
        p, c = self.p, self.c
        E = np.array(self.basis, dtype=np.int64)
        a = np.array(self.exponents, dtype=np.int64)
        S = E[:, None, :] + E[None, :, :]
        valid = np.all(S < a, axis=2)
        coef = np.ones((self.dim, self.dim), dtype=np.int64)
        for i in range(c):
            for j in range(i):
                q = self.config.commutation[i][j]
                top = (a[i] - 1) * (a[j] - 1)
                table = np.array([pow(q, k, p) for k in range(top + 1)], dtype=np.int64)
                coef = coef * table[np.outer(E[:, i], E[:, j])] % p
        strides = np.cumprod(np.concatenate([[1], a[:-1]]))
        code_to_index = np.empty(int(np.prod(a)), dtype=np.int64)
        code_to_index[E @ strides] = np.arange(self.dim)
        codes = np.where(valid, (np.minimum(S, a - 1) * strides).sum(axis=2), 0)
        self.prod_index = np.where(valid, code_to_index[codes], -1)
        self.prod_coef = np.where(valid, coef, 0)

    def _verify_against_moves(self):
        for x, e in enumerate(self.basis):
            for y, f in enumerate(self.basis):
                r = generator_word_product(self.config, e, f)
                t = self.prod_index[x, y]
                if r is None:
                    ok = t < 0
                else:
                    ok = t == self.index[r[1]] and self.prod_coef[x, y] == r[0]
                if not ok:
                    raise AssertionError(f"structure constant mismatch at {e} * {f}")

    def __repr__(self):
        return f"Algebra(p={self.p}, exponents={self.exponents})"

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.config == other.config

    def __hash__(self):
        return hash(self.config)

    # elements -----------------------------------------------------------
    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def one(self) -> np.ndarray:
        return self.monomial((0,) * self.c)

    def monomial(self, e, scalar: int = 1) -> np.ndarray:
        v = self.zero()
        v[self.index[tuple(e)]] = scalar % self.p
        return v

    def generator(self, i: int) -> np.ndarray:
        v = self.zero()
        v[self.generators[i]] = 1
        return v

    @cached_property
    def left_monomial_matrices(self) -> np.ndarray:
        """L[e][t, f]: coefficient of basis t in x^e * x^f."""
        L = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
        ex, fy = np.nonzero(self.prod_index >= 0)
        L[ex, self.prod_index[ex, fy], fy] = self.prod_coef[ex, fy]
        L.flags.writeable = False
        return L

    def left_matrix(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("e,etf->tf", u, self.left_monomial_matrices) % self.p

    def right_matrix(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("etf,f->te", self.left_monomial_matrices, u) % self.p

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError("element length does not match algebra dimension")
        return linalg.matmul(self.left_matrix(np.asarray(u) % self.p), np.asarray(v) % self.p, self.p)

    def power(self, u: np.ndarray, n: int) -> np.ndarray:
        out = self.one()
        for _ in range(n):
            out = self.multiply(out, u)
        return out

    @cached_property
    def regular_actions(self) -> tuple[np.ndarray, ...]:
        return tuple(self.left_monomial_matrices[g] for g in self.generators)

    # Frobenius structure -------------------------------------------------
    @cached_property
    def frobenius_gram(self) -> np.ndarray:
        """<x^e, x^f> = coefficient of the top monomial in x^e x^f."""
        G = np.where(self.prod_index == self.top, self.prod_coef, 0).astype(np.int64)
        if linalg.rank(G, self.p) != self.dim:
            raise DegenerateForm("Frobenius form is degenerate")
        G.flags.writeable = False
        return G

    @cached_property
    def nakayama(self) -> "AlgebraAutomorphism":
        """nu with <u, v> = <v, nu(u)>, solved from the Gram matrix."""
        p = self.p
        G = self.frobenius_gram
        N = linalg.matmul(linalg.inverse(G, p), G.T.copy(), p)
        diag = np.diag(N).copy()
        if np.any(N - np.diag(diag)):
            raise NotDiagonal("Nakayama map is not diagonal on monomials")
        gens = tuple(int(diag[g]) for g in self.generators)
        nu = AlgebraAutomorphism(self, gens)
        if not np.array_equal(nu.basis_scalars, diag):
            raise NotAutomorphism("Nakayama map is not induced by its generator scalars")
        nu.check_multiplicative()
        return nu

    @cached_property
    def opposite(self) -> "Algebra":
        return opposite_algebra(self)


@dataclass(frozen=True)
class AlgebraAutomorphism:
    """Diagonal automorphism x_i -> s_i x_i."""

    algebra: Algebra
    generator_scalars: tuple[int, ...]
    basis_scalars: np.ndarray = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.algebra.p
        E = np.array(self.algebra.basis, dtype=np.int64)
        s = np.ones(self.algebra.dim, dtype=np.int64)
        for i, si in enumerate(self.generator_scalars):
            s = s * np.array([pow(si, int(k), p) for k in E[:, i]], dtype=np.int64) % p
        s.flags.writeable = False
        object.__setattr__(self, "basis_scalars", s)

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.basis_scalars)

    @property
    def order(self) -> int:
        fld = self.algebra.config.field
        n = 1
        for s in self.generator_scalars:
            k = fld.order(s)
            n = n * k // gcd(n, k)
        return n

    @property
    def is_identity(self) -> bool:
        return all(s == 1 for s in self.generator_scalars)

    def apply(self, u: np.ndarray) -> np.ndarray:
        return u * self.basis_scalars % self.algebra.p

    def power(self, k: int) -> "AlgebraAutomorphism":
        fld = self.algebra.config.field
        return AlgebraAutomorphism(self.algebra, tuple(fld.pow(s, k) for s in self.generator_scalars))

    def inverse(self) -> "AlgebraAutomorphism":
        return self.power(-1)

    def check_multiplicative(self):
        A = self.algebra
        ok = A.prod_index >= 0
        lhs = self.basis_scalars[np.where(ok, A.prod_index, 0)]
        rhs = np.outer(self.basis_scalars, self.basis_scalars) % A.p
        if np.any(ok & (lhs != rhs)):
            raise NotAutomorphism("phi(uv) != phi(u) phi(v)")

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraAutomorphism)
            and self.algebra == other.algebra
            and self.generator_scalars == other.generator_scalars
        )

    def __hash__(self):
        return hash((self.algebra, self.generator_scalars))


@lru_cache(maxsize=64)
def build_algebra(config: AlgebraConfig) -> Algebra:
    return Algebra(config)


def multiply(algebra: Algebra, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return algebra.multiply(u, v)


def frobenius_form(algebra: Algebra) -> np.ndarray:
    return algebra.frobenius_gram


def nakayama_automorphism(algebra: Algebra) -> AlgebraAutomorphism:
    return algebra.nakayama


def opposite_algebra(algebra: Algebra) -> Algebra:
    q = algebra.config.commutation
    c = algebra.c
    cfg = AlgebraConfig(
        algebra.config.field,
        algebra.config.exponents,
        tuple(tuple(q[j][i] for j in range(c)) for i in range(c)),
    )
    return build_algebra(cfg)


def regular_module(algebra: Algebra):
    from .modrep import regular_module as _regular

    return _regular(algebra)


def algebra_dimension(exponents) -> int:
    return prod(exponents)
