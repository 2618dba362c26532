"""AR-translate, almost split sequences and exploration of stable AR-components."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import __version__, linalg
from .decomp import (
    AbsolutelyIndecomposable,
    Decomposition,
    decompose,
    end_algebra,
    is_indecomposable,
    is_isomorphic,
)
from .errors import (
    BudgetExceeded,
    HypothesisViolated,
    MissingSequence,
    NotIndecomposable,
    ProjectiveInput,
    SocleSearchFailed,
)
from .homology import (
    ShortExactSequence,
    extension_from_cocycle,
    hom_space,
    lift_to_syzygy,
    projective_cover,
    stable_hom,
    stable_hom_dim,
    strip_projective,
    syzygy,
)
from .modrep import ModuleMap, ModuleRep, module_from_dict, regular_module, simple_module, twist
from .qalgebra import AlgebraAutomorphism
from .seeding import rng_for

MIN_LIFT_TESTS = 10


# ---------------------------------------------------------------------------
# the translate


def _nonprojective_part(M: ModuleRep) -> ModuleRep:
    if M.dim == 0:
        raise ProjectiveInput("tau is undefined on the zero module")
    C = strip_projective(M).complement
    if C.dim == 0:
        raise ProjectiveInput("tau is undefined on projective modules")
    return C


def translate_automorphism(algebra) -> AlgebraAutomorphism:
    """The twist entering tau = Omega^2 o twist.

    ``Algebra.nakayama`` satisfies <u, v> = <v, nu(u)>; with modules twisted
    by x_i -> s_i x_i, the AR formula holds for the inverse of that map.
    """
    return algebra.nakayama.inverse()


def tau(M: ModuleRep) -> ModuleRep:
    """Omega^2 of the Nakayama twist of M."""
    if "tau" not in M._cache:
        C = _nonprojective_part(M)
        M._cache["tau"] = syzygy(twist(C, translate_automorphism(M.algebra)), 2)
    return M._cache["tau"]


def tau_swapped(M: ModuleRep) -> ModuleRep:
    """The Nakayama twist of Omega^2 M; isomorphic to tau(M)."""
    C = _nonprojective_part(M)
    return twist(syzygy(C, 2), translate_automorphism(M.algebra))


def tau_inverse(M: ModuleRep) -> ModuleRep:
    if "tau_inv" not in M._cache:
        C = _nonprojective_part(M)
        M._cache["tau_inv"] = twist(syzygy(C, -2), translate_automorphism(M.algebra).inverse())
    return M._cache["tau_inv"]


def tau_power(M: ModuleRep, n: int) -> ModuleRep:
    for _ in range(abs(n)):
        M = tau(M) if n > 0 else tau_inverse(M)
    return M


# ---------------------------------------------------------------------------
# almost split sequences


@dataclass
class ARSequence:
    sequence: ShortExactSequence
    middle: Decomposition
    cocycle: np.ndarray  # map Omega(right) -> left representing the socle class
    lift_tests: int
    checks: dict

    @property
    def left(self) -> ModuleRep:
        return self.sequence.left

    @property
    def right(self) -> ModuleRep:
        return self.sequence.right

    @property
    def middle_module(self) -> ModuleRep:
        return self.sequence.middle

    @property
    def valid(self) -> bool:
        return all(self.checks.values())


def _socle_class(N: ModuleRep, L: ModuleRep, seed: int) -> np.ndarray:
    """A nonzero class in Ext1(N, L) killed by both endomorphism radicals."""
    p = N.p
    cov = projective_cover(N)
    ON = cov.syzygy
    SH = stable_hom(ON, L)
    d = SH.dim
    if d == 0:
        raise SocleSearchFailed("Ext1(N, tau N) vanishes")
    reps = SH.representatives()

    def composites():
        for rho in end_algebra(L, seed=seed).radical:
            yield linalg.matmul(rho, reps, p)
        for phi in end_algebra(N, seed=seed).radical:
            om = lift_to_syzygy(ModuleMap(N, N, phi, check=False)).matrix
            yield linalg.matmul(reps, om, p)

    # x is killed iff x^T C = 0 where C collects the coordinates of all composites;
    # the column span of C has dimension <= d, so it is reduced chunk by chunk.
    span = np.zeros((d, 0), dtype=np.int64)
    batch: list[np.ndarray] = []
    step = max(1, linalg.CHUNK_ENTRIES // max(1, reps.size))

    def absorb(span, batch):
        coords = SH.coordinates(np.concatenate(batch, axis=0)).reshape(len(batch), d, d)
        C = coords.transpose(1, 0, 2).reshape(d, -1)
        return linalg.span_columns(np.concatenate([span, C], axis=1), p)

    for comp in composites():
        batch.append(comp)
        if len(batch) == step:
            span, batch = absorb(span, batch), []
    if batch:
        span = absorb(span, batch)
    Z = linalg.nullspace(span.T.copy(), p) if span.shape[1] else np.eye(d, dtype=np.int64)
    if Z.shape[1] == 0:
        raise SocleSearchFailed("no class is annihilated by the radicals")
    x = Z[:, 0]
    return linalg.matmul(x[None, :], reps.reshape(d, -1), p).reshape(reps.shape[1:])


def _test_modules(N: ModuleRep) -> list[ModuleRep]:
    A = N.algebra
    k = simple_module(A)
    R = regular_module(A)
    mods = [k, R, syzygy(k, 1), syzygy(k, -1), syzygy(N, 1), syzygy(N, -1), tau(N)]
    return [X for X in mods if X.dim]


def _lifts(seq: ShortExactSequence, X: ModuleRep, tests: np.ndarray) -> np.ndarray:
    """Which of the maps tests[k]: X -> right factor through the surjection."""
    p = seq.left.p
    H = hom_space(X, seq.middle)
    if H.dim == 0:
        return ~tests.reshape(tests.shape[0], -1).any(axis=1)
    comp = linalg.matmul(seq.surject.matrix, H.maps, p).reshape(H.dim, -1).T
    R, piv = linalg.rref(comp.T.copy(), p)
    resid = linalg.reduce_rows(tests.reshape(tests.shape[0], -1), R, piv, p)
    return ~resid.any(axis=1)


def _retraction(X: ModuleRep, N: ModuleRep, t: np.ndarray) -> bool:
    p = X.p
    H = hom_space(N, X)
    if H.dim == 0:
        return False
    comp = linalg.matmul(t, H.maps, p).reshape(H.dim, -1).T
    return linalg.solve(comp, np.eye(N.dim, dtype=np.int64).reshape(-1), p) is not None


def _lifting_test(seq: ShortExactSequence, N: ModuleRep, catalog, seed: int) -> tuple[bool, int]:
    """Radical maps into N from test modules must lift through the surjection.

    Liftable maps form a subspace, so for an indecomposable X not isomorphic
    to N a basis of Hom(X, N) is a complete test set.
    """
    p = N.p
    ok, count = True, 0
    rad = end_algebra(N, seed=seed).radical
    if rad.shape[0]:
        lifted = _lifts(seq, N, rad)
        ok &= bool(lifted.all())
        count += rad.shape[0]
    for X, trusted in [(X, False) for X in (catalog or [])] + [(X, True) for X in _test_modules(N)]:
        if X.algebra != N.algebra or X.dim == 0:
            continue
        if X.canonical_key == N.canonical_key and is_isomorphic(X, N, seed=seed)[0]:
            continue
        H = hom_space(X, N)
        tests = H.maps if trusted else np.array([t for t in H.maps if not _retraction(X, N, t)])
        tests = tests[[bool(np.any(t)) for t in tests]] if len(tests) else tests
        if len(tests) == 0:
            continue
        lifted = _lifts(seq, X, tests)
        ok &= bool(lifted.all())
        count += len(tests)
    return ok, count


def ar_sequence_ending_at(N: ModuleRep, *, seed: int = 0, catalog=None) -> ARSequence:
    key = ("ar_end", seed)
    if key in N._cache:
        return N._cache[key]
    if N.dim == 0 or strip_projective(N).free_rank:
        raise ProjectiveInput("the end term must be non-projective")
    verdict = is_indecomposable(N, seed=seed)
    if not isinstance(verdict, AbsolutelyIndecomposable):
        raise NotIndecomposable(f"end term is {type(verdict).__name__}")
    L = tau(N)
    f = _socle_class(N, L, seed)
    seq = extension_from_cocycle(N, L, f)
    lifted, count = _lifting_test(seq, N, catalog, seed)
    checks = {
        "exact": seq.is_exact(),
        "non_split": not seq.is_split(),
        "lifting": lifted and count >= MIN_LIFT_TESTS,
    }
    ar = ARSequence(seq, decompose(seq.middle, seed=seed), f, count, checks)
    N._cache[key] = ar
    return ar


def ar_sequence_starting_at(M: ModuleRep, *, seed: int = 0, catalog=None) -> ARSequence:
    return ar_sequence_ending_at(tau_inverse(M), seed=seed, catalog=catalog)


# ---------------------------------------------------------------------------
# quiver fragments


@dataclass
class Vertex:
    id: int
    module: ModuleRep
    distance: int
    orbit: int = -1
    periodic: bool = False
    period: int | None = None
    absolute: bool = True
    expanded: bool = False

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def key(self) -> str:
        return self.module.key_hash


@dataclass
class QuiverFragment:
    algebra_hash: str
    start: int
    radius: int
    seed: int
    vertices: list[Vertex] = field(default_factory=list)
    # (source, target) -> [a, b]; None where the bounding sequence was not computed
    arrows: dict = field(default_factory=dict)
    tau_links: dict = field(default_factory=dict)  # vertex id -> id of tau(vertex)
    projective_attachments: list = field(default_factory=list)  # (end vertex id, free rank)
    middles: dict = field(default_factory=dict)  # vertex id -> [[summand id or "P", mult], ...]
    frontier: list = field(default_factory=list)
    complete: bool = True
    sequences: dict = field(default_factory=dict, repr=False)  # vertex id -> ARSequence ending there

    def vertex(self, i: int) -> Vertex:
        return self.vertices[i]

    def valuation(self, s: int, t: int):
        return tuple(self.arrows[(s, t)])

    def orbits(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for v in self.vertices:
            out.setdefault(v.orbit, []).append(v.id)
        return out

    def to_dict(self, *, include_modules: bool = True) -> dict:
        d = {
            "algebra": self.algebra_hash,
            "start": self.start,
            "radius": self.radius,
            "seed": self.seed,
            "complete": self.complete,
            "vertices": [
                {
                    "id": v.id,
                    "dim": v.dim,
                    "key": v.key,
                    "distance": v.distance,
                    "orbit": v.orbit,
                    "periodic": v.periodic,
                    "period": v.period,
                    "absolute": v.absolute,
                    "expanded": v.expanded,
                    **({"module": v.module.to_dict()} if include_modules else {}),
                }
                for v in self.vertices
            ],
            "arrows": [
                {"source": s, "target": t, "valuation": list(val)}
                for (s, t), val in sorted(self.arrows.items())
            ],
            "tau": [[s, t] for s, t in sorted(self.tau_links.items())],
            "projective_attachments": [list(x) for x in self.projective_attachments],
            "middles": {str(k): v for k, v in sorted(self.middles.items())},
            "frontier": sorted(self.frontier),
        }
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "QuiverFragment":
        frag = cls(d["algebra"], d["start"], d["radius"], d["seed"], complete=d["complete"])
        for vd in d["vertices"]:
            M = module_from_dict(vd["module"])
            frag.vertices.append(
                Vertex(vd["id"], M, vd["distance"], vd["orbit"], vd["periodic"], vd["period"],
                       vd["absolute"], vd["expanded"])
            )
        frag.arrows = {(a["source"], a["target"]): list(a["valuation"]) for a in d["arrows"]}
        frag.tau_links = {s: t for s, t in d["tau"]}
        frag.projective_attachments = [tuple(x) for x in d["projective_attachments"]]
        frag.middles = {int(k): v for k, v in d["middles"].items()}
        frag.frontier = list(d["frontier"])
        return frag

    def to_dot(self) -> str:
        lines = ["digraph component {", "  rankdir=LR;", '  node [shape=ellipse, fontname="Helvetica"];']
        for v in self.vertices:
            label = f"d={v.dim} id={v.key}" + (" P" if v.periodic else "")
            style = ", style=dashed" if v.id in self.frontier else ""
            lines.append(f'  v{v.id} [label="{label}"{style}];')
        for n, (vid, rank) in enumerate(self.projective_attachments):
            lines.append(f'  p{n} [shape=box, label="A^{rank}"];')
            lines.append(f"  p{n} -> v{vid} [style=dotted];")
        for (s, t), (a, b) in sorted(self.arrows.items()):
            sa = "?" if a is None else a
            sb = "?" if b is None else b
            lines.append(f'  v{s} -> v{t} [label="({sa},{sb})"];')
        for s, t in sorted(self.tau_links.items()):
            lines.append(f'  v{s} -> v{t} [style=dashed, color=gray, label="tau"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


class _Explorer:
    def __init__(self, start: ModuleRep, radius: int, seed: int, max_vertices: int, period_bound: int | None):
        A = start.algebra
        self.seed = seed
        self.radius = radius
        self.max_vertices = max_vertices
        self.period_bound = period_bound or max(2, A.nakayama.order)
        self.frag = QuiverFragment(A.config.to_json(), 0, radius, seed)
        self.parent: list[int] = []

    # union-find over tau links
    def _find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def _union(self, i: int, j: int):
        a, b = self._find(i), self._find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def locate(self, M: ModuleRep, distance: int) -> int:
        for v in self.frag.vertices:
            if v.module.canonical_key == M.canonical_key and is_isomorphic(v.module, M, seed=self.seed)[0]:
                return v.id
        if len(self.frag.vertices) >= self.max_vertices:
            self.frag.complete = False
            raise BudgetExceeded(f"more than {self.max_vertices} vertices", self.frag)
        v = Vertex(len(self.frag.vertices), M, distance)
        self.frag.vertices.append(v)
        self.parent.append(v.id)
        return v.id

    def ending(self, vid: int) -> ARSequence:
        if vid not in self.frag.sequences:
            v = self.frag.vertex(vid)
            self.frag.sequences[vid] = ar_sequence_ending_at(v.module, seed=self.seed)
        return self.frag.sequences[vid]

    def record_middle(self, vid: int, ar: ARSequence, distance: int) -> list[tuple[int, int]]:
        if vid in self.frag.middles:
            return [(x, m) for x, m in self.frag.middles[vid] if x != "P"]
        out = []
        desc = []
        for s in ar.middle.summands:
            if s.projective:
                self.frag.projective_attachments.append((vid, s.multiplicity))
                desc.append(["P", s.multiplicity])
                continue
            sid = self.locate(s.module, distance)
            out.append((sid, s.multiplicity))
            desc.append([sid, s.multiplicity])
        self.frag.middles[vid] = desc
        return out

    def expand(self, vid: int):
        v = self.frag.vertex(vid)
        d = v.distance + 1
        ar = self.ending(vid)
        # predecessors X -> v with a_{Xv} = multiplicity of X
        for sid, m in self.record_middle(vid, ar, d):
            self.frag.arrows.setdefault((sid, vid), [None, None])[0] = m
        tid = self.locate(ar.left, d)
        self.frag.tau_links[vid] = tid
        self._union(vid, tid)
        # successors v -> Y via the sequence ending at tau^-1 v
        uid = self.locate(tau_inverse(v.module), d)
        self.frag.tau_links[uid] = vid
        self._union(uid, vid)
        start_seq = self.ending(uid)
        self.record_middle(uid, start_seq, d)
        for s in start_seq.middle.summands:
            if s.projective:
                continue
            yid = self.locate(s.module, d)
            self.frag.arrows.setdefault((vid, yid), [None, None])[1] = s.multiplicity
        v.expanded = True

    def fill_valuations(self):
        """Complete (a, b) pairs from sequences already computed."""
        for (s, t), val in self.frag.arrows.items():
            if val[0] is None and t in self.frag.middles:
                val[0] = sum(m for x, m in self.frag.middles[t] if x == s)
            if val[1] is None:
                # b_{st} = multiplicity of t in the sequence ending at tau^-1 s
                for u, w in self.frag.tau_links.items():
                    if w == s and u in self.frag.middles:
                        val[1] = sum(m for x, m in self.frag.middles[u] if x == t)

    def mark_periodic(self):
        for v in self.frag.vertices:
            v.absolute = isinstance(is_indecomposable(v.module, seed=self.seed), AbsolutelyIndecomposable)
            cur = v.module
            for n in range(1, self.period_bound + 1):
                try:
                    cur = tau(cur)
                except ProjectiveInput:
                    break
                if cur.dim == v.dim and is_isomorphic(cur, v.module, seed=self.seed)[0]:
                    v.periodic, v.period = True, n
                    break

    def run(self, start: ModuleRep) -> QuiverFragment:
        sid = self.locate(start, 0)
        self.frag.start = sid
        try:
            i = 0
            while i < len(self.frag.vertices):
                v = self.frag.vertices[i]
                if v.distance < self.radius and not v.expanded:
                    self.expand(v.id)
                i += 1
        finally:
            self.fill_valuations()
            for v in self.frag.vertices:
                v.orbit = self._find(v.id)
            self.frag.frontier = [v.id for v in self.frag.vertices if not v.expanded]
        self.mark_periodic()
        return self.frag


def explore_component(
    start: ModuleRep,
    radius: int,
    *,
    seed: int = 0,
    max_vertices: int = 60,
    period_bound: int | None = None,
) -> QuiverFragment:
    if start.dim == 0 or strip_projective(start).free_rank:
        raise ProjectiveInput("exploration must start at a non-projective module")
    verdict = is_indecomposable(start, seed=seed)
    if not isinstance(verdict, AbsolutelyIndecomposable):
        raise NotIndecomposable(f"start module is {type(verdict).__name__}")
    return _Explorer(start, radius, seed, max_vertices, period_bound).run(start)


def arrow_valuation(M: ModuleRep, N: ModuleRep, fragment: QuiverFragment, *, seed: int = 0):
    """(a_MN, b_MN) for the arrow M -> N recorded in the fragment."""
    ids = []
    for X in (M, N):
        found = [v.id for v in fragment.vertices if v.module.canonical_key == X.canonical_key
                 and is_isomorphic(v.module, X, seed=seed)[0]]
        if not found:
            raise MissingSequence("module is not a vertex of the fragment")
        ids.append(found[0])
    val = fragment.arrows.get(tuple(ids))
    if val is None or all(x is None for x in val):
        raise MissingSequence("no bounding sequence recorded for this arrow")
    return tuple(val)


# ---------------------------------------------------------------------------
# classification


@dataclass
class TreeClassEvidence:
    verdict: str  # Tube | TildeA12Pattern | AInfinityConsistent | NonRegularBoundary | Inconclusive
    parameter: int | None = None  # tube rank or radius
    reason: str = ""
    data: dict = field(default_factory=dict)

    def label(self) -> str:
        if self.verdict in ("Tube", "AInfinityConsistent"):
            return f"{self.verdict}({self.parameter})"
        if self.verdict == "Inconclusive":
            return f"Inconclusive({self.reason})"
        return self.verdict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "parameter": self.parameter, "reason": self.reason,
                "label": self.label(), "data": self.data}


def end_vertices(fragment: QuiverFragment) -> list[int]:
    """Vertices whose ending sequence has a single non-projective summand of multiplicity 1."""
    ends = []
    for vid, desc in sorted(fragment.middles.items()):
        nonproj = [(x, m) for x, m in desc if x != "P"]
        if len(nonproj) == 1 and nonproj[0][1] == 1:
            ends.append(vid)
    return ends


def classify_component(fragment: QuiverFragment) -> TreeClassEvidence:
    vals = [tuple(v) for v in fragment.arrows.values() if None not in v]
    periods = {v.id: v.period for v in fragment.vertices}
    orbits = fragment.orbits()
    ends = end_vertices(fragment)
    data = {
        "valuations": sorted(set(vals)),
        "periods": {str(k): periods[k] for k in sorted(periods)},
        "tau_orbits": len(orbits),
        "end_vertices": ends,
        "projective_attachments": [list(x) for x in fragment.projective_attachments],
        "radius": fragment.radius,
        "complete": fragment.complete,
    }
    if any(not v.absolute for v in fragment.vertices):
        return TreeClassEvidence("Inconclusive", reason="non-absolutely indecomposable vertex", data=data)
    if fragment.radius < 2:
        return TreeClassEvidence("Inconclusive", reason="radius below 2", data=data)
    periodic = [v for v in fragment.vertices if v.periodic]
    if periodic and len(periodic) == len(fragment.vertices):
        ps = {v.period for v in periodic}
        if len(ps) == 1:
            return TreeClassEvidence("Tube", parameter=ps.pop(), data=data)
        return TreeClassEvidence("Inconclusive", reason="mixed tau-periods", data=data)
    if periodic:
        return TreeClassEvidence("Inconclusive", reason="periodic and non-periodic vertices mixed", data=data)
    mids = [[(x, m) for x, m in desc if x != "P"] for desc in fragment.middles.values()]
    if (
        len(orbits) == 2
        and vals
        and all(v == (2, 2) for v in vals)
        and all(len(m) == 1 and m[0][1] == 2 for m in mids)
        and fragment.projective_attachments
    ):
        return TreeClassEvidence("TildeA12Pattern", data=data)
    if vals and all(v == (1, 1) for v in vals) and ends and fragment.radius >= 3:
        return TreeClassEvidence("AInfinityConsistent", parameter=fragment.radius, data=data)
    if fragment.projective_attachments:
        return TreeClassEvidence("NonRegularBoundary", data=data)
    return TreeClassEvidence("Inconclusive", reason="no known pattern matched", data=data)


# ---------------------------------------------------------------------------
# additive functions


def additive_function(W: ModuleRep, fragment: QuiverFragment, *, seed: int = 0) -> dict:
    """d_W(v) = dim stable Hom(W, v) per vertex, with additivity and tau residuals."""
    pieces = [s.module for s in decompose(W, seed=seed).non_projective()]
    offenders = []
    for X in pieces:
        for v in fragment.vertices:
            shifts = (v.module, syzygy(v.module, 1), syzygy(v.module, -1))
            if any(X.canonical_key == S.canonical_key and is_isomorphic(X, S, seed=seed)[0] for S in shifts):
                offenders.append({"summand_dim": X.dim, "vertex": v.id})
                break
    if offenders:
        raise HypothesisViolated(offenders)
    values = {v.id: stable_hom_dim(W, v.module) for v in fragment.vertices}
    residuals = {}
    for vid, ar in sorted(fragment.sequences.items()):
        mid = stable_hom_dim(W, ar.middle_module)
        residuals[vid] = mid - stable_hom_dim(W, ar.left) - stable_hom_dim(W, ar.right)
    tau_res = {}
    try:
        tau_invariant = is_isomorphic(tau(W), W, seed=seed)[0]
    except ProjectiveInput:
        tau_invariant = False
    if tau_invariant:
        for s, t in sorted(fragment.tau_links.items()):
            tau_res[s] = values[t] - values[s]
    return {"values": values, "additivity_residuals": residuals, "tau_invariant": tau_invariant,
            "tau_residuals": tau_res}


# ---------------------------------------------------------------------------
# cache


def cache_key(fragment_algebra: str, start: ModuleRep, radius: int, seed: int) -> str:
    h = hashlib.sha256()
    for part in (__version__, fragment_algebra, start.content_hash, str(radius), str(seed)):
        h.update(part.encode() + b"\x00")
    return h.hexdigest()[:24]


def explore_cached(start: ModuleRep, radius: int, *, seed: int = 0, **kw) -> QuiverFragment:
    """explore_component with a JSON cache in $QCI_CACHE_DIR when set."""
    root = os.environ.get("QCI_CACHE_DIR")
    if not root:
        return explore_component(start, radius, seed=seed, **kw)
    key = cache_key(start.algebra.config.to_json(), start, radius, seed)
    path = os.path.join(root, f"fragment-{key}.json")
    if os.path.exists(path):
        with open(path) as fh:
            return QuiverFragment.from_dict(json.load(fh))
    frag = explore_component(start, radius, seed=seed, **kw)
    os.makedirs(root, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(frag.to_json())
    os.replace(tmp, path)
    return frag

