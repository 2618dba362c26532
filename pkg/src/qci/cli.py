"""Command-line interface: algebra-info, explore, verify and rank-variety."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__, linalg
from .artranslate import classify_component, explore_cached
from .errors import BudgetExceeded, ConfigError, QCIError, SplitBudgetExceeded
from .modrep import ModuleRep, module_from_json, quotient, radical, regular_module, simple_module, socle
from .qalgebra import AlgebraConfig, build_algebra
from .rankvariety import principal_module, probe_variety, report_json
from .verify import SUITE_ALIASES, SUITES, run_checks

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_VERIFY = 4

START_CHOICES = ("k", "radA", "AmodSoc", "au", "A", "file")


@dataclass(frozen=True)
class RunConfig:
    algebra: AlgebraConfig
    seed: int | None = None
    radius: int = 2
    max_vertices: int = 60
    out: str | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigError("radius must be non-negative")
        if self.max_vertices <= 0:
            raise ConfigError("max_vertices must be positive")


def _read_config_source(text: str) -> dict:
    """Inline JSON or a path to a JSON file."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return json.loads(text)
        with open(text) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None


def load_run_config(args: argparse.Namespace) -> RunConfig:
    raw = _read_config_source(args.config)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    algebra = raw.get("algebra", raw)
    seed = args.seed if getattr(args, "seed", None) is not None else raw.get("seed")
    radius = getattr(args, "radius", None)
    radius = radius if radius is not None else int(raw.get("radius", 2))
    max_vertices = getattr(args, "max_vertices", None) or int(raw.get("max_vertices", 60))
    out = getattr(args, "out", None) or raw.get("out")
    return RunConfig(AlgebraConfig.from_dict(algebra), seed, radius, max_vertices, out)


def _require_seed(cfg: RunConfig) -> int:
    if cfg.seed is None:
        raise ConfigError("a seed is required (--seed or \"seed\" in the config)")
    return int(cfg.seed)


def _parse_point(text: str | None, c: int) -> list[int]:
    if text is None:
        return [1, 2] + [0] * (c - 2)
    try:
        lam = [int(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad point {text!r}") from None
    if len(lam) != c:
        raise ConfigError(f"point needs {c} coordinates")
    return lam


def start_module(cfg: RunConfig, start: str, *, point: str | None = None, module_path: str | None = None) -> ModuleRep:
    A = build_algebra(cfg.algebra)
    R = regular_module(A)
    if start == "k":
        return simple_module(A)
    if start == "radA":
        return radical(R).as_module()[0]
    if start == "AmodSoc":
        return quotient(R, socle(R))[0]
    if start == "au":
        return principal_module(A, _parse_point(point, A.c), 1)[0]
    if start == "A":
        return R
    if start == "file":
        if not module_path:
            raise ConfigError("--module PATH is required with --start file")
        try:
            with open(module_path) as fh:
                return module_from_json(fh.read(), A)
        except OSError as exc:
            raise ConfigError(f"cannot read module: {exc}") from None
    raise ConfigError(f"unknown start {start!r}")


def _emit(text: str, out_dir: str | None, name: str) -> str | None:
    if out_dir is None:
        return None
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_algebra_info(cfg: RunConfig) -> dict:
    A = build_algebra(cfg.algebra)
    nu = A.nakayama
    gram = A.frobenius_gram
    info = {
        "config": cfg.algebra.to_dict(),
        "dim": A.dim,
        "basis_size": len(A.basis),
        "nakayama_scalars": list(nu.generator_scalars),
        "nakayama_order": nu.order,
        "frobenius_nondegenerate": linalg.rank(gram, A.p) == A.dim,
    }
    return info


def cmd_explore(cfg: RunConfig, start: str, *, point=None, module_path=None, fmt: str = "both") -> dict:
    seed = _require_seed(cfg)
    M = start_module(cfg, start, point=point, module_path=module_path)
    frag = explore_cached(M, cfg.radius, seed=seed, max_vertices=cfg.max_vertices)
    evidence = classify_component(frag)
    stem = f"fragment-{start}-r{cfg.radius}-s{seed}"
    files = []
    if fmt in ("json", "both"):
        payload = frag.to_dict()
        payload["evidence"] = evidence.to_dict()
        path = _emit(_dumps(payload), cfg.out, stem + ".json")
        files.append(path)
    if fmt in ("dot", "both"):
        files.append(_emit(frag.to_dot(), cfg.out, stem + ".dot"))
    return {
        "start": start,
        "radius": cfg.radius,
        "seed": seed,
        "vertices": len(frag.vertices),
        "verdict": evidence.label(),
        "end_vertices": evidence.data["end_vertices"],
        "files": [f for f in files if f],
    }


def cmd_verify(cfg: RunConfig, suite: str):
    seed = _require_seed(cfg)
    suite = SUITE_ALIASES.get(suite, suite)
    report = run_checks(cfg.algebra, suite=suite, seed=seed)
    _emit(report.to_json(), cfg.out, f"verify-{suite}-s{seed}.json")
    return report


def cmd_rank_variety(cfg: RunConfig, start: str, *, point=None, module_path=None, strategy="auto", samples=64) -> dict:
    seed = _require_seed(cfg)
    M = start_module(cfg, start, point=point, module_path=module_path)
    report = probe_variety(M, strategy, samples=samples, seed=seed)
    _emit(report_json(report) + "\n", cfg.out, f"rank-variety-{start}-s{seed}.json")
    return report


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qci", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", required=True, help="JSON file path or inline JSON object")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="master seed")
        p.add_argument("--out", default=None, help="output directory")

    p = sub.add_parser("algebra-info", help="dimension, Nakayama scalars and Frobenius check")
    common(p, seed=False)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("explore", help="explore a stable AR-component")
    common(p)
    p.add_argument("--start", choices=START_CHOICES, default="k")
    p.add_argument("--point", default=None, help="comma-separated lambda for --start au")
    p.add_argument("--module", default=None, help="module JSON for --start file")
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("--format", choices=("json", "dot", "both"), default="both")

    p = sub.add_parser("verify", help="run the verification suite")
    common(p)
    p.add_argument("--suite", choices=SUITES + tuple(SUITE_ALIASES), default="quick")

    p = sub.add_parser("rank-variety", help="scan the rank variety of a module")
    common(p)
    p.add_argument("--start", choices=START_CHOICES, default="au")
    p.add_argument("--point", default=None)
    p.add_argument("--module", default=None)
    p.add_argument("--strategy", choices=("auto", "line_scan_c2", "random"), default="auto")
    p.add_argument("--samples", type=int, default=64)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_run_config(args)
        if args.command == "algebra-info":
            info = cmd_algebra_info(cfg)
            _emit(_dumps(info), cfg.out, "algebra-info.json")
            if args.format == "json":
                sys.stdout.write(_dumps(info))
            else:
                print(f"dim A            {info['dim']}")
                print(f"basis size       {info['basis_size']}")
                print(f"nu scalars       {info['nakayama_scalars']}")
                print(f"nu order         {info['nakayama_order']}")
                print(f"Frobenius form   {'nondegenerate' if info['frobenius_nondegenerate'] else 'DEGENERATE'}")
            return EXIT_OK
        if args.command == "explore":
            summary = cmd_explore(cfg, args.start, point=args.point, module_path=args.module, fmt=args.format)
            sys.stdout.write(_dumps(summary))
            return EXIT_OK
        if args.command == "verify":
            report = cmd_verify(cfg, args.suite)
            sys.stdout.write(report.to_json())
            return EXIT_OK if report.ok else EXIT_VERIFY
        if args.command == "rank-variety":
            report = cmd_rank_variety(
                cfg, args.start, point=args.point, module_path=args.module,
                strategy=args.strategy, samples=args.samples,
            )
            sys.stdout.write(report_json(report) + "\n")
            return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BudgetExceeded, SplitBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (QCIError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR  # pragma: no cover - argparse enforces a command


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
