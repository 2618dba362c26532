"""Finite-dimensional modules given by action matrices of the generators."""
from __future__ import annotations

import hashlib
import json
from functools import cached_property

import numpy as np

from . import linalg
from .errors import AlgebraMismatch, CommutationViolated, NotInvariant, RelationViolated
from .qalgebra import Algebra, AlgebraAutomorphism, AlgebraConfig, build_algebra


def _as_columns(a, n: int, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(n, -1) if a.size else np.zeros((n, 0), dtype=np.int64)
    return a % p


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class ModuleRep:
    """A left module: matrices X_1..X_c acting on column vectors.

    Instances are treated as immutable; derived data (monomial actions,
    covers, hulls, endomorphism algebras) is memoised on the instance.
    """

    def __init__(self, algebra: Algebra, actions, *, check: bool = True):
        self.algebra = algebra
        acts = [np.asarray(x, dtype=np.int64) % algebra.p for x in actions]
        if len(acts) != algebra.c:
            raise ValueError(f"expected {algebra.c} action matrices, got {len(acts)}")
        n = acts[0].shape[0] if acts[0].ndim == 2 else 0
        for x in acts:
            if x.shape != (n, n):
                raise ValueError("action matrices must be square and of equal size")
        self.actions = tuple(_frozen(x) for x in acts)
        self.dim = n
        self._cache: dict = {}
        if check:
            _check_relations(algebra, self.actions)

    @property
    def p(self) -> int:
        return self.algebra.p

    def __repr__(self):
        return f"ModuleRep(dim={self.dim}, key={self.short_id})"

    @cached_property
    def monomial_actions(self) -> np.ndarray:
        """Matrices of x^e for every basis monomial, shape (dim A, n, n)."""
        A = self.algebra
        out = np.zeros((A.dim, self.dim, self.dim), dtype=np.int64)
        out[0] = np.eye(self.dim, dtype=np.int64)
        for k, e in enumerate(A.basis[1:], start=1):
            i = next(j for j, x in enumerate(e) if x)
            rest = list(e)
            rest[i] -= 1
            out[k] = linalg.matmul(self.actions[i], out[A.index[tuple(rest)]], self.p)
        out.flags.writeable = False
        return out

    def act(self, u: np.ndarray) -> np.ndarray:
        """Matrix of the algebra element ``u`` acting on the module."""
        return np.einsum("e,eab->ab", np.asarray(u, dtype=np.int64), self.monomial_actions) % self.p

    @cached_property
    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.algebra.config.to_json().encode())
        h.update(str(self.dim).encode())
        for x in self.actions:
            h.update(np.ascontiguousarray(x, dtype="<i8").tobytes())
        return h.hexdigest()

    @property
    def short_id(self) -> str:
        return self.content_hash[:12]

    @cached_property
    def canonical_key(self) -> tuple:
        """Isomorphism invariant: (dim, sorted ranks of X_i and X_i X_j, dim soc, dim top)."""
        p = self.p
        r1 = sorted(linalg.rank(x, p) for x in self.actions)
        r2 = sorted(
            linalg.rank(linalg.matmul(x, y, p), p) for x in self.actions for y in self.actions
        )
        return (self.dim, tuple(r1), tuple(r2), socle(self).dim, self.dim - radical(self).dim)

    @cached_property
    def key_hash(self) -> str:
        return hashlib.sha256(repr(self.canonical_key).encode()).hexdigest()[:10]

    def to_dict(self, *, algebra_ref: str = "config") -> dict:
        alg = self.algebra.config.to_dict() if algebra_ref == "config" else self.algebra.config.to_json()
        return {
            "algebra": alg,
            "dim": self.dim,
            "actions": [x.tolist() for x in self.actions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def module_from_dict(d: dict, algebra: Algebra | None = None) -> ModuleRep:
    if algebra is None:
        ref = d["algebra"]
        cfg = AlgebraConfig.from_json(ref) if isinstance(ref, str) else AlgebraConfig.from_dict(ref)
        algebra = build_algebra(cfg)
    n = int(d["dim"])
    acts = [np.array(x, dtype=np.int64).reshape(n, n) for x in d["actions"]]
    return check_module(algebra, acts)


def module_from_json(text: str, algebra: Algebra | None = None) -> ModuleRep:
    return module_from_dict(json.loads(text), algebra)


def _check_relations(algebra: Algebra, actions) -> None:
    p = algebra.p
    n = actions[0].shape[0]
    if n == 0:
        return
    for i, x in enumerate(actions):
        xp = linalg.matpow(x, algebra.exponents[i], p)
        if np.any(xp):
            raise RelationViolated(i, int(np.flatnonzero(xp.any(axis=0))[0]))
    q = algebra.config.commutation
    for i in range(algebra.c):
        for j in range(i + 1, algebra.c):
            lhs = linalg.matmul(actions[i], actions[j], p)
            rhs = q[i][j] * linalg.matmul(actions[j], actions[i], p) % p
            bad = (lhs != rhs).any(axis=0)
            if bad.any():
                raise CommutationViolated(i, j, int(np.flatnonzero(bad)[0]))


def check_module(algebra: Algebra, actions) -> ModuleRep:
    return ModuleRep(algebra, actions, check=True)


def zero_module(algebra: Algebra) -> ModuleRep:
    return ModuleRep(algebra, [np.zeros((0, 0), dtype=np.int64)] * algebra.c, check=False)


def simple_module(algebra: Algebra) -> ModuleRep:
    return ModuleRep(algebra, [np.zeros((1, 1), dtype=np.int64)] * algebra.c, check=False)


def regular_module(algebra: Algebra) -> ModuleRep:
    key = "regular"
    cached = algebra.__dict__.get("_module_cache", {}).get(key)
    if cached is not None:
        return cached
    M = ModuleRep(algebra, algebra.regular_actions, check=False)
    algebra.__dict__.setdefault("_module_cache", {})[key] = M
    return M


def free_module(algebra: Algebra, rank: int) -> ModuleRep:
    cache = algebra.__dict__.setdefault("_module_cache", {})
    key = ("free", rank)
    if key not in cache:
        acts = [np.kron(np.eye(rank, dtype=np.int64), x) for x in algebra.regular_actions]
        cache[key] = ModuleRep(algebra, acts, check=False)
    return cache[key]


class ModuleMap:
    """A homomorphism given by a (target.dim x source.dim) matrix."""

    def __init__(self, source: ModuleRep, target: ModuleRep, matrix, *, check: bool = True):
        if source.algebra != target.algebra:
            raise AlgebraMismatch("maps must be between modules over one algebra")
        self.source = source
        self.target = target
        m = np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim) % source.p
        self.matrix = _frozen(m)
        if check and not self.is_intertwiner():
            raise ValueError("matrix does not intertwine the actions")

    @property
    def p(self) -> int:
        return self.source.p

    def is_intertwiner(self) -> bool:
        p = self.p
        F = self.matrix
        return all(
            np.array_equal(linalg.matmul(F, xs, p), linalg.matmul(xt, F, p))
            for xs, xt in zip(self.source.actions, self.target.actions)
        )

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        return ModuleMap(other.source, self.target, linalg.matmul(self.matrix, other.matrix, self.p), check=False)

    @property
    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    def is_injective(self) -> bool:
        return self.rank == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def kernel(self) -> "Submodule":
        return Submodule(self.source, linalg.nullspace(self.matrix, self.p), check=False)

    def image(self) -> "Submodule":
        return Submodule(self.target, linalg.span_columns(self.matrix, self.p), check=False)


class Submodule:
    """An action-invariant subspace, spanned by the columns of ``basis``."""

    def __init__(self, parent: ModuleRep, basis, *, check: bool = True):
        p = parent.p
        B = _as_columns(basis, parent.dim, p)
        if B.shape[1] and linalg.rank(B, p) != B.shape[1]:
            B = linalg.span_columns(B, p)
        self.parent = parent
        self.basis = _frozen(B)
        if check:
            for x in parent.actions:
                img = linalg.matmul(x, B, p)
                if linalg.rank(np.concatenate([B, img], axis=1), p) != B.shape[1]:
                    raise NotInvariant("subspace is not stable under the action")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def _selector(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows ``r`` with basis[r] invertible, and that inverse."""
        p = self.parent.p
        rows = linalg.column_pivots(self.basis.T, p)
        return rows, linalg.inverse(self.basis[rows, :], p)

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of vectors (columns) known to lie in the span."""
        rows, inv = self._selector
        return linalg.matmul(inv, vectors[rows, :], self.parent.p)

    def as_module(self) -> tuple[ModuleRep, ModuleMap]:
        """The submodule as a ModuleRep together with its inclusion."""
        P = self.parent
        acts = [self.coordinates(linalg.matmul(x, self.basis, P.p)) for x in P.actions]
        sub = ModuleRep(P.algebra, acts, check=False)
        return sub, ModuleMap(sub, P, self.basis, check=False)


def submodule_generated(M: ModuleRep, vectors) -> Submodule:
    """Smallest submodule containing the given columns (action closure)."""
    p = M.p
    V = linalg.span_columns(_as_columns(vectors, M.dim, p), p)
    while True:
        imgs = [V] + [linalg.matmul(x, V, p) for x in M.actions]
        W = linalg.span_columns(np.concatenate(imgs, axis=1), p)
        if W.shape[1] == V.shape[1]:
            return Submodule(M, W, check=False)
        V = W


def radical(M: ModuleRep) -> Submodule:
    if "radical" not in M._cache:
        if M.dim == 0:
            B = np.zeros((0, 0), dtype=np.int64)
        else:
            B = linalg.span_columns(np.concatenate(M.actions, axis=1), M.p)
        M._cache["radical"] = Submodule(M, B, check=False)
    return M._cache["radical"]


def socle(M: ModuleRep) -> Submodule:
    if "socle" not in M._cache:
        if M.dim == 0:
            B = np.zeros((0, 0), dtype=np.int64)
        else:
            B = linalg.nullspace(np.concatenate(M.actions, axis=0), M.p)
        M._cache["socle"] = Submodule(M, B, check=False)
    return M._cache["socle"]


def top_generators(M: ModuleRep) -> np.ndarray:
    """Standard basis vectors complementing rad M; they generate M minimally."""
    R = radical(M).basis
    piv = linalg.column_pivots(R.T, M.p) if R.shape[1] else np.zeros(0, dtype=np.int64)
    free = linalg.free_columns(M.dim, piv)
    G = np.zeros((M.dim, free.size), dtype=np.int64)
    G[free, np.arange(free.size)] = 1
    return G


def quotient(M: ModuleRep, S: Submodule) -> tuple[ModuleRep, ModuleMap]:
    """M / S on the complement spanned by the non-pivot identity columns."""
    p = M.p
    n = M.dim
    if S.dim:
        R, piv = linalg.rref(S.basis.T, p)
    else:
        R, piv = np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64)
    free = linalg.free_columns(n, piv)
    q = free.size
    proj = np.zeros((q, n), dtype=np.int64)
    proj[:, free] = np.eye(q, dtype=np.int64)
    if piv.size:
        proj[:, piv] = (-R[:, free].T) % p
    acts = []
    for x in M.actions:
        if S.dim and np.any(linalg.matmul(proj, linalg.matmul(x, S.basis, p), p)):
            raise NotInvariant("subspace is not stable under the action")
        acts.append(linalg.matmul(proj, x, p)[:, free])
    Q = ModuleRep(M.algebra, acts, check=False)
    return Q, ModuleMap(M, Q, proj, check=False)


def direct_sum(*modules: ModuleRep) -> ModuleRep:
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    A = modules[0].algebra
    for N in modules[1:]:
        if N.algebra != A:
            raise AlgebraMismatch("direct sum of modules over different algebras")
    n = sum(N.dim for N in modules)
    acts = []
    for i in range(A.c):
        X = np.zeros((n, n), dtype=np.int64)
        off = 0
        for N in modules:
            X[off : off + N.dim, off : off + N.dim] = N.actions[i]
            off += N.dim
        acts.append(X)
    return ModuleRep(A, acts, check=False)


def twist(M: ModuleRep, phi: AlgebraAutomorphism) -> ModuleRep:
    """The module _phi M: x_i acts as phi(x_i) = s_i x_i."""
    if phi.algebra != M.algebra:
        raise AlgebraMismatch("automorphism of a different algebra")
    acts = [s * x % M.p for s, x in zip(phi.generator_scalars, M.actions)]
    return ModuleRep(M.algebra, acts, check=False)


def dual(M: ModuleRep) -> ModuleRep:
    """k-dual Hom_k(M, k), a left module over the opposite algebra."""
    return ModuleRep(M.algebra.opposite, [x.T.copy() for x in M.actions], check=False)


def conjugate(M: ModuleRep, T: np.ndarray) -> ModuleRep:
    """Isomorphic copy with actions T X T^-1 (T is a witness M -> result)."""
    p = M.p
    Ti = linalg.inverse(T, p)
    return ModuleRep(M.algebra, [linalg.matmul(linalg.matmul(T, x, p), Ti, p) for x in M.actions], check=False)


def cyclic_module(algebra: Algebra, relations) -> ModuleRep:
    """A / (A w_1 + ... + A w_r) for algebra elements w_k."""
    A = regular_module(algebra)
    rels = [np.asarray(w, dtype=np.int64) % algebra.p for w in relations]
    if not rels:
        return A
    S = submodule_generated(A, np.stack(rels, axis=1))
    return quotient(A, S)[0]
