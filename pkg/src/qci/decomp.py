"""Endomorphism algebras, indecomposability verdicts, Fitting decomposition, isomorphism tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy

from . import linalg
from .errors import AlgebraMismatch, RadicalUncertain, SplitBudgetExceeded
from .homology import hom_space, strip_projective
from .modrep import ModuleRep, Submodule, regular_module
from .seeding import rng_for

ISO_TRIALS = 32
SPLIT_TRIALS = 32


# ---------------------------------------------------------------------------
# polynomials of matrices


def _poly_roots(coeffs: np.ndarray, p: int) -> np.ndarray:
    """Roots in F_p of a polynomial given by ascending coefficients."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        acc = (acc * xs + int(c)) % p
    return np.flatnonzero(acc == 0)


def _krylov_poly(F: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Monic polynomial of least degree annihilating v under F (ascending coefficients)."""
    vecs = [v % p]
    while True:
        K = np.stack(vecs, axis=1)
        nxt = linalg.matmul(F, vecs[-1][:, None], p)[:, 0]
        c = linalg.solve(K, nxt, p)
        if c is not None:
            return np.concatenate([(-c) % p, [1]]).astype(np.int64)
        vecs.append(nxt)


def _min_poly(F: np.ndarray, p: int) -> np.ndarray:
    """Minimal polynomial of a square matrix (ascending coefficients)."""
    n = F.shape[0]
    pows = [np.eye(n, dtype=np.int64).reshape(-1)]
    cur = np.eye(n, dtype=np.int64)
    while True:
        cur = linalg.matmul(cur, F, p)
        K = np.stack(pows, axis=1)
        c = linalg.solve(K, cur.reshape(-1), p)
        if c is not None:
            return np.concatenate([(-c) % p, [1]]).astype(np.int64)
        pows.append(cur.reshape(-1))


def _factor(coeffs: np.ndarray, p: int) -> list[tuple[np.ndarray, int]]:
    """Monic irreducible factors over F_p with multiplicities (ascending coefficients)."""
    t = sympy.Symbol("t")
    poly = sympy.Poly([int(c) for c in coeffs[::-1]], t, modulus=p)
    out = []
    for g, e in poly.factor_list()[1]:
        g = g.monic()
        asc = np.array([int(c) % p for c in g.all_coeffs()[::-1]], dtype=np.int64)
        out.append((asc, int(e)))
    out.sort(key=lambda ge: (len(ge[0]), ge[0].tolist()))
    return out


def _eval_poly(coeffs: np.ndarray, F: np.ndarray, p: int) -> np.ndarray:
    n = F.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in coeffs[::-1]:
        out = (linalg.matmul(out, F, p) + int(c) * np.eye(n, dtype=np.int64)) % p
    return out


def _nilpotent_span(maps: np.ndarray, p: int) -> bool:
    """True iff the associative algebra generated by ``maps`` is nilpotent."""
    if maps.shape[0] == 0:
        return True
    n = maps.shape[1]
    V = np.eye(n, dtype=np.int64)
    for _ in range(n + 1):
        if V.shape[1] == 0:
            return True
        imgs = linalg.matmul(maps, V, p)
        V = linalg.span_columns(np.concatenate(list(imgs), axis=1), p)
    return V.shape[1] == 0


# ---------------------------------------------------------------------------
# endomorphism algebra


@dataclass
class EndAlgebra:
    module: ModuleRep
    maps: np.ndarray  # (h, n, n) basis
    radical: np.ndarray  # (r, n, n) basis of the Jacobson radical
    is_local: bool
    method: str  # "local" or "trace"
    eigenvalues: tuple[int, ...] = ()  # for local End: scalar part of each basis map

    @property
    def dim(self) -> int:
        return self.maps.shape[0]

    @property
    def radical_dim(self) -> int:
        return self.radical.shape[0]

    @property
    def semisimple_dim(self) -> int:
        return self.dim - self.radical_dim

    @cached_property
    def _coord_solver(self):
        p = self.module.p
        flat = self.maps.reshape(self.dim, -1)
        cols = linalg.column_pivots(flat, p)
        return cols, linalg.inverse(flat[:, cols], p)

    def coordinates(self, F: np.ndarray) -> np.ndarray:
        cols, inv = self._coord_solver
        return linalg.matmul(F.reshape(-1)[cols][None, :], inv, self.module.p)[0]

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """T[i, j] = coordinates of maps[i] @ maps[j]."""
        p = self.module.p
        h = self.dim
        prods = linalg.matmul(self.maps[:, None], self.maps[None, :], p).reshape(h * h, -1)
        cols, inv = self._coord_solver
        return linalg.matmul(prods[:, cols], inv, p).reshape(h, h, h)


def _local_test(M: ModuleRep, maps: np.ndarray, v: np.ndarray):
    """Eigenvalues and radical basis when End(M) is local, else None."""
    p = M.p
    alphas = []
    for F in maps:
        kp = _krylov_poly(F, v, p)
        roots = _poly_roots(kp, p)
        if roots.size != 1:
            return None
        a = int(roots[0])
        d = len(kp) - 1
        # (t - a)^d expanded
        expect = np.array([1], dtype=np.int64)
        for _ in range(d):
            expect = (np.concatenate([[0], expect]) - a * np.concatenate([expect, [0]])) % p
        if not np.array_equal(expect, kp):
            return None
        alphas.append(a)
    n = M.dim
    shifted = (maps - np.array(alphas, dtype=np.int64)[:, None, None] * np.eye(n, dtype=np.int64)) % p
    if not _nilpotent_span(shifted, p):
        return None
    basis = linalg.rref(shifted.reshape(len(alphas), -1), p)[0]
    return tuple(alphas), basis.reshape(-1, n, n)


def _trace_radical(M: ModuleRep, maps: np.ndarray) -> np.ndarray:
    p = M.p
    if p <= M.dim:
        raise RadicalUncertain(f"trace form needs p > dim M ({p} <= {M.dim})")
    h = maps.shape[0]
    # Gram[i, j] = tr(F_i F_j) = sum_ab F_i[a, b] F_j[b, a]
    flat = maps.reshape(h, -1)
    flatT = np.transpose(maps, (0, 2, 1)).reshape(h, -1)
    G = linalg.matmul(flat, flatT.T.copy(), p)
    Z = linalg.nullspace(G, p)
    rad = np.einsum("hk,hab->kab", Z, maps) % p
    if not _nilpotent_span(rad, p):
        raise RadicalUncertain("trace-form kernel is not nilpotent")
    return rad


def _local_end(M: ModuleRep, seed: int) -> EndAlgebra | None:
    """End(M) with its radical when it is local, else None (cached)."""
    key = ("end_local", seed)
    if key not in M._cache:
        maps = hom_space(M, M).maps
        v = rng_for(seed, "end-local", M.content_hash).integers(1, M.p, size=M.dim)
        loc = _local_test(M, maps, v)
        M._cache[key] = None if loc is None else EndAlgebra(M, maps, loc[1], True, "local", loc[0])
    return M._cache[key]


def end_algebra(M: ModuleRep, *, seed: int = 0) -> EndAlgebra:
    """End(M) with its radical: the local ideal when End(M) is local, else the trace-form kernel."""
    if "end" in M._cache:
        return M._cache["end"]
    maps = hom_space(M, M).maps
    if M.dim == 0:
        E = EndAlgebra(M, maps, maps, False, "local")
    else:
        E = _local_end(M, seed)
        if E is None:
            E = EndAlgebra(M, maps, _trace_radical(M, maps), False, "trace")
    M._cache["end"] = E
    return E


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class AbsolutelyIndecomposable:
    end: EndAlgebra


@dataclass
class Decomposable:
    idempotent: np.ndarray  # projection onto one proper summand
    kernel: np.ndarray  # columns spanning the complementary summands
    image: np.ndarray


@dataclass
class NotAbsolutelyIndecomposable:
    semisimple_dim: int
    reason: str


def _fitting_split(M: ModuleRep, F: np.ndarray):
    """Proper splitting from a map whose minimal polynomial has two coprime factors."""
    p = M.p
    n = M.dim
    factors = _factor(_min_poly(F, p), p)
    if len(factors) < 2:
        return None, factors
    g, e = factors[0]
    ge = np.array([1], dtype=np.int64)
    for _ in range(e):
        ge = np.convolve(ge, g) % p
    psi = _eval_poly(ge, F, p)
    pw = 1
    while pw < n:
        pw *= 2
    psi = linalg.matpow(psi, pw, p)
    K = linalg.nullspace(psi, p)
    I = linalg.span_columns(psi, p)
    T = np.concatenate([K, I], axis=1)
    D = np.zeros((n, n), dtype=np.int64)
    D[K.shape[1] :, K.shape[1] :] = np.eye(I.shape[1], dtype=np.int64)
    idem = linalg.matmul(linalg.matmul(T, D, p), linalg.inverse(T, p), p)
    return Decomposable(idem, K, I), factors


def is_indecomposable(M: ModuleRep, *, seed: int = 0, trials: int = SPLIT_TRIALS):
    if M.dim == 0:
        raise ValueError("the zero module has no indecomposability verdict")
    key = ("verdict", seed)
    if key in M._cache:
        return M._cache[key]
    E = _local_end(M, seed)
    if E is not None:
        verdict = AbsolutelyIndecomposable(E)
        M._cache[key] = verdict
        return verdict
    H = hom_space(M, M)
    rng = rng_for(seed, "fitting", M.content_hash)
    # a generic endomorphism already separates summands with distinct eigenvalues
    n_tried = 0

    def candidates():
        for _ in range(2):
            yield H.random_element(rng)
        yield from H.maps
        for _ in range(trials):
            yield H.random_element(rng)

    nonlinear = False
    verdict = None
    for F in candidates():
        n_tried += 1
        split, factors = _fitting_split(M, F)
        if split is not None:
            verdict = split
            break
        if factors and len(factors[0][0]) > 2:
            nonlinear = True
    if verdict is None:
        try:
            E = end_algebra(M, seed=seed)
        except RadicalUncertain:
            raise SplitBudgetExceeded(
                f"no splitting endomorphism in {n_tried} trials and the radical is undetermined"
            ) from None
        reason = "irreducible nonlinear minimal polynomial" if nonlinear else "no idempotent found"
        verdict = NotAbsolutelyIndecomposable(E.semisimple_dim, reason)
    M._cache[key] = verdict
    return verdict


# ---------------------------------------------------------------------------
# isomorphism


def is_isomorphic(M: ModuleRep, N: ModuleRep, *, seed: int = 0, trials: int = ISO_TRIALS):
    """(True, witness M -> N) if an invertible intertwiner is found, else (False, None)."""
    if M.algebra != N.algebra:
        raise AlgebraMismatch("modules over different algebras")
    if M.dim != N.dim:
        return False, None
    if M.dim == 0:
        return True, np.zeros((0, 0), dtype=np.int64)
    if M.content_hash == N.content_hash:
        return True, np.eye(M.dim, dtype=np.int64)
    if M.canonical_key != N.canonical_key:
        return False, None
    p = M.p
    H = hom_space(M, N)
    if H.dim == 0 or H.dim != hom_space(N, M).dim:
        return False, None
    n = M.dim
    for F in H.maps:
        if linalg.rank(F, p) == n:
            return True, F
    rng = rng_for(seed, "iso", M.content_hash, N.content_hash)
    for _ in range(trials):
        F = H.random_element(rng)
        if linalg.rank(F, p) == n:
            return True, F
    return False, None


def isomorphic(M: ModuleRep, N: ModuleRep, *, seed: int = 0) -> bool:
    return is_isomorphic(M, N, seed=seed)[0]


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class Summand:
    module: ModuleRep
    multiplicity: int
    absolute: bool = True
    projective: bool = False


@dataclass
class Decomposition:
    module: ModuleRep
    summands: list[Summand]
    witness: np.ndarray  # columns: copies of each summand's basis, group by group
    notes: list[str] = field(default_factory=list)

    def pieces(self) -> list[tuple[ModuleRep, int]]:
        return [(s.module, s.multiplicity) for s in self.summands]

    @property
    def total_dim(self) -> int:
        return sum(s.module.dim * s.multiplicity for s in self.summands)

    def block_actions(self) -> list[np.ndarray]:
        n = self.module.dim
        acts = [np.zeros((n, n), dtype=np.int64) for _ in range(self.module.algebra.c)]
        off = 0
        for s in self.summands:
            d = s.module.dim
            for _ in range(s.multiplicity):
                for i, x in enumerate(s.module.actions):
                    acts[i][off : off + d, off : off + d] = x
                off += d
        return acts

    def verify(self) -> bool:
        p = self.module.p
        T = self.witness
        if self.total_dim != self.module.dim or linalg.rank(T, p) != self.module.dim:
            return False
        return all(
            np.array_equal(linalg.matmul(x, T, p), linalg.matmul(T, b, p))
            for x, b in zip(self.module.actions, self.block_actions())
        )

    def multiplicity_of(self, X: ModuleRep, *, seed: int = 0) -> int:
        for s in self.summands:
            if is_isomorphic(s.module, X, seed=seed)[0]:
                return s.multiplicity
        return 0

    def non_projective(self) -> list[Summand]:
        return [s for s in self.summands if not s.projective]

    def projective_rank(self) -> int:
        return sum(s.multiplicity for s in self.summands if s.projective)


def _split_leaves(M: ModuleRep, seed: int, trials: int, notes: list[str]):
    """Leaves as (module, inclusion columns into M, absolute flag)."""
    p = M.p
    stack = [(M, np.eye(M.dim, dtype=np.int64))]
    leaves = []
    while stack:
        X, inc = stack.pop()
        verdict = is_indecomposable(X, seed=seed, trials=trials)
        if isinstance(verdict, Decomposable):
            for cols in (verdict.image, verdict.kernel):
                Y, j = Submodule(X, cols, check=False).as_module()
                stack.append((Y, linalg.matmul(inc, j.matrix, p)))
        else:
            absolute = isinstance(verdict, AbsolutelyIndecomposable)
            if not absolute:
                notes.append(f"summand of dim {X.dim} not absolutely indecomposable: {verdict.reason}")
            leaves.append((X, inc, absolute))
    return leaves


def decompose(M: ModuleRep, *, seed: int = 0, trials: int = SPLIT_TRIALS) -> Decomposition:
    key = ("decomposition", seed)
    if key in M._cache:
        return M._cache[key]
    p = M.p
    A = M.algebra
    notes: list[str] = []
    groups: list[list] = []  # [representative, [inclusions], absolute, projective]
    strip = strip_projective(M) if M.dim else None
    if strip is not None and strip.free_rank:
        R = regular_module(A)
        incs = [strip.free_inclusion[:, j * A.dim : (j + 1) * A.dim] for j in range(strip.free_rank)]
        groups.append([R, incs, True, True])
    if strip is not None and strip.complement.dim:
        C = strip.complement
        try:
            leaves = _split_leaves(C, seed, trials, notes)
        except SplitBudgetExceeded as exc:
            raise SplitBudgetExceeded(str(exc), partial=groups) from None
        for X, inc, absolute in leaves:
            full = linalg.matmul(strip.inclusion.matrix, inc, p)
            for g in groups:
                if g[3]:
                    continue
                ok, phi = is_isomorphic(X, g[0], seed=seed)
                if ok:
                    # copy of the representative: x -> inc(phi^-1 x)
                    g[1].append(linalg.matmul(full, linalg.inverse(phi, p), p))
                    break
            else:
                groups.append([X, [full], absolute, False])
    groups.sort(key=lambda g: (g[0].dim, g[0].key_hash, g[0].content_hash))
    summands = [Summand(g[0], len(g[1]), g[2], g[3]) for g in groups]
    cols = [c for g in groups for c in g[1]]
    T = np.concatenate(cols, axis=1) if cols else np.zeros((M.dim, 0), dtype=np.int64)
    D = Decomposition(M, summands, T, notes)
    M._cache[key] = D
    return D

