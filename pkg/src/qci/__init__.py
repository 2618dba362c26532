"""Quantum complete intersections: modules, syzygies, AR-theory and rank varieties over F_p."""
from __future__ import annotations

__version__ = "0.1.0"

from ._kernels import backend  # noqa: E402
from .artranslate import (  # noqa: E402
    additive_function,
    ar_sequence_ending_at,
    ar_sequence_starting_at,
    arrow_valuation,
    classify_component,
    explore_component,
    tau,
    tau_inverse,
)
from .decomp import decompose, end_algebra, is_indecomposable, is_isomorphic  # noqa: E402
from .homology import (  # noqa: E402
    ext_dim,
    extension_from_cocycle,
    hom_space,
    injective_hull,
    projective_cover,
    stable_hom_dim,
    syzygy,
)
from .modrep import (  # noqa: E402
    ModuleMap,
    ModuleRep,
    direct_sum,
    quotient,
    radical,
    regular_module,
    simple_module,
    socle,
    twist,
)
from .qalgebra import Algebra, AlgebraConfig, build_algebra  # noqa: E402
from .rankvariety import (  # noqa: E402
    JordanType,
    jordan_type,
    principal_module,
    probe_variety,
    rank_variety_contains,
)
from .verify import run_checks  # noqa: E402
