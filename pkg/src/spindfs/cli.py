"""Command-line front end.

    spindfs analyze  --matrix G.json [--out report.json]
    spindfs simulate --matrix G.json --env env.json --out DIR [--pairs 1:2,b01:b10]
                     [--t-max 6.28] [--t-steps 64]
    spindfs classify --matrix G.json --pairs 3:0,b01:b10 [--out cases.json]
    spindfs verify   --matrix G.json

Exit codes: 0 ok, 1 a verify check failed, 2 unreadable input,
3 instance too large, 4 pair label out of range.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .checks import run_oracle_suite
from .dfs import (
    check_symmetry,
    dfs_partition,
    dfs_report,
    pair_case,
    preserves_coherence,
    required_symmetry,
)
from .evolution import (
    MAX_DENSITY_REGISTER,
    evolve_density,
    rate_series,
    time_grid,
)
from .model import (
    BasisIndex,
    CapacityError,
    ModelError,
    RegisterDensity,
    load_env_state,
    load_interaction_matrix,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_PAIR_RANGE = 4

MAX_DEFAULT_PAIRS = 64


class PairRangeError(ModelError):
    pass


@dataclass
class RunConfig:
    command: str
    matrix_path: Path
    env_path: Path | None = None
    pairs: list[tuple[str, str]] = field(default_factory=list)
    t_max: float = 2 * math.pi
    t_steps: int = 64
    out_path: Path | None = None


def parse_label(text: str, K: int) -> int:
    """Decimal label, or MSB-first binary with a ``b`` prefix (``b0110``)."""
    text = text.strip()
    if text.startswith("b"):
        bits = text[1:]
        if not bits or set(bits) - {"0", "1"}:
            raise ModelError(f"bad binary label {text!r}")
        if len(bits) != K:
            raise PairRangeError(f"binary label {text!r} has {len(bits)} digits, K={K}")
        return int(bits, 2)
    try:
        k = int(text)
    except ValueError:
        raise ModelError(f"bad label {text!r}") from None
    if not 0 <= k < 1 << K:
        raise PairRangeError(f"label {k} outside 0..{(1 << K) - 1}")
    return k


def split_pairs(spec: str) -> list[tuple[str, str]]:
    pairs = []
    for item in filter(None, (s.strip() for s in spec.split(","))):
        left, sep, right = item.partition(":")
        if not sep or not left or not right:
            raise ModelError(f"pair {item!r} is not of the form k:k2")
        pairs.append((left, right))
    return pairs


def _resolve_pairs(cfg: RunConfig, K: int) -> list[tuple[int, int]]:
    return [(parse_label(a, K), parse_label(b, K)) for a, b in cfg.pairs]


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text + "\n")
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")


def cmd_analyze(cfg: RunConfig) -> int:
    G = load_interaction_matrix(cfg.matrix_path)
    _emit(dfs_report(G).to_json(), cfg.out_path)
    return EXIT_OK


def _default_pairs(G) -> list[tuple[int, int]]:
    members = dfs_partition(G).classes[0].members
    pairs = [(a, b) for i, a in enumerate(members) for b in members[i + 1:]]
    return pairs[:MAX_DEFAULT_PAIRS]


def cmd_simulate(cfg: RunConfig) -> int:
    if cfg.env_path is None:
        raise ModelError("simulate needs --env")
    if cfg.out_path is None:
        raise ModelError("simulate needs --out (a directory)")
    if not (math.isfinite(cfg.t_max) and cfg.t_max > 0) or cfg.t_steps < 1:
        raise ModelError("need t_max > 0 and t_steps >= 1")
    G = load_interaction_matrix(cfg.matrix_path)
    env = load_env_state(cfg.env_path)
    pairs = _resolve_pairs(cfg, G.K) if cfg.pairs else _default_pairs(G)
    grid = time_grid(cfg.t_max, cfg.t_steps)
    out = Path(cfg.out_path)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for k, k2 in pairs:
        series = rate_series(G, k, k2, env, grid)
        name = f"rate_{k}_{k2}.csv"
        (out / name).write_text(series.to_csv(), encoding="utf-8")
        entries.append({
            "k": k,
            "k2": k2,
            "dfs": preserves_coherence(G, k, k2),
            "min_abs_r": float(np.min(np.abs(series.values))),
            "csv": name,
        })
    summary = {"K": G.K, "N": G.N, "t_max": cfg.t_max, "t_steps": cfg.t_steps,
               "pairs": entries, "purity_at_t_max": None}
    if G.K <= MAX_DENSITY_REGISTER:
        # uniform register superposition: purity tracks overall coherence loss
        plus = RegisterDensity.pure(np.ones(1 << G.K))
        summary["purity_at_t_max"] = evolve_density(G, plus, env, cfg.t_max).purity()
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    G = load_interaction_matrix(cfg.matrix_path)
    if not cfg.pairs:
        raise ModelError("classify needs --pairs")
    rows = []
    for k, k2 in _resolve_pairs(cfg, G.K):
        case = pair_case(k, k2, G.K)
        entry = {
            "k": BasisIndex(k, G.K).bits,
            "k2": BasisIndex(k2, G.K).bits,
            "case": case.tag.value,
            "table_case": case.tag.label,
            "positions": [p for p in (case.l1, case.l2) if p is not None],
            "required_symmetry": None,
            "satisfied": None,
            "preserved": preserves_coherence(G, k, k2),
        }
        if case.l1 is not None:
            sym = required_symmetry(case)
            entry["required_symmetry"] = sym.to_json()
            entry["satisfied"] = check_symmetry(G, sym)
        rows.append(entry)
    _emit(json.dumps(rows, indent=2), cfg.out_path)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    G = load_interaction_matrix(cfg.matrix_path)
    results = run_oracle_suite(G)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spindfs", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--matrix", required=True, type=Path, help="interaction matrix JSON")
    parser.add_argument("--env", type=Path, help="environment state JSON")
    parser.add_argument("--pairs", default="", help="comma-separated k:k2 (decimal or bNNN)")
    parser.add_argument("--t-max", type=float, default=2 * math.pi)
    parser.add_argument("--t-steps", type=int, default=64)
    parser.add_argument("--out", type=Path, help="output file (directory for simulate)")
    return parser


def run(cfg: RunConfig) -> int:
    try:
        return COMMANDS[cfg.command](cfg)
    except CapacityError as exc:
        print(f"spindfs: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except PairRangeError as exc:
        print(f"spindfs: {exc}", file=sys.stderr)
        return EXIT_PAIR_RANGE
    except (ModelError, OSError) as exc:
        print(f"spindfs: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        pairs = split_pairs(args.pairs)
    except ModelError as exc:
        print(f"spindfs: {exc}", file=sys.stderr)
        return EXIT_PARSE
    cfg = RunConfig(args.command, args.matrix, args.env, pairs, args.t_max,
                    args.t_steps, args.out)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
