"""Command-line front end.

Subcommands:
  test      one mutual-dependence statistic with a permutation p-value
  pairwise  distance covariance on every block pair, Bonferroni-corrected
  simulate  Monte Carlo size/power study driven by a JSON config file
  demo-ff   bundled annual-factors demo: correlations, mutual and pairwise tests

Exit codes: 0 success, 2 usage error, 3 data error, 4 budget error.
Errors are emitted as machine-readable JSON on stdout. The default
term budget can be overridden with the MUTUALDEP_BUDGET environment
variable or the --budget flag.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .errors import BudgetExceeded, MutualDepError
from .inference import (
    PermutationPlan,
    adaptive_B,
    pairwise_bonferroni,
    permutation_test,
    resolve_kind,
)
from .ingest import bundled_factors_path, parse_block_spec, parse_csv, parse_fama_french
from .measures import CostGuard
from .sample import make_sample
from .simulation import ScenarioConfig, emit_report, run_power_study

USAGE_ERROR, DATA_ERROR, BUDGET_ERROR = 2, 3, 4


def _default_budget() -> int:
    env = os.environ.get("MUTUALDEP_BUDGET")
    return int(env) if env else CostGuard().max_elementary_terms


def _guard(args) -> CostGuard:
    return CostGuard(max_elementary_terms=args.budget)


def _load_sample(args):
    matrix, _header = parse_csv(args.input, has_header=args.header)
    idx, dims = parse_block_spec(args.blocks, matrix.shape[1])
    if idx is not None:
        matrix = matrix[:, list(idx)]
    return make_sample(matrix, dims)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _fail(exc: BaseException, code: int) -> int:
    _emit({"error": {"type": type(exc).__name__, "message": str(exc)}})
    return code


def cmd_test(args) -> int:
    try:
        kind = resolve_kind(args.measure)
    except ValueError as exc:
        return _fail(exc, USAGE_ERROR)
    try:
        sample = _load_sample(args)
    except (MutualDepError, OSError, ValueError) as exc:
        return _fail(exc, DATA_ERROR)
    B = args.B if args.B is not None else adaptive_B(sample.n)
    plan = PermutationPlan(B=B, seed=args.seed, parallel=args.parallel)
    t0 = time.perf_counter()
    try:
        out = permutation_test(sample, kind, plan, _guard(args))
    except BudgetExceeded as exc:
        return _fail(exc, BUDGET_ERROR)
    except MutualDepError as exc:
        return _fail(exc, DATA_ERROR)
    elapsed_ms = 1000.0 * (time.perf_counter() - t0)
    _emit(
        {
            "measure": out.kind,
            "statistic": out.observed,
            "p_value": out.p_value,
            "B": out.B,
            "n": sample.n,
            "d": sample.d,
            "block_dims": list(sample.blocks.block_dims),
            "seed": out.seed,
            "alpha": args.alpha,
            "elapsed_ms": elapsed_ms,
        }
    )
    return 0


def cmd_pairwise(args) -> int:
    try:
        sample = _load_sample(args)
    except (MutualDepError, OSError, ValueError) as exc:
        return _fail(exc, DATA_ERROR)
    B = args.B if args.B is not None else adaptive_B(sample.n)
    plan = PermutationPlan(B=B, seed=args.seed, parallel=args.parallel)
    t0 = time.perf_counter()
    try:
        out = pairwise_bonferroni(sample, args.alpha, plan, _guard(args))
    except MutualDepError as exc:
        return _fail(exc, DATA_ERROR)
    elapsed_ms = 1000.0 * (time.perf_counter() - t0)
    _emit(
        {
            "pairs": [
                {"i": i, "j": j, "statistic": o.observed, "p_value": o.p_value}
                for i, j, o in out.pairs
            ],
            "alpha": out.alpha,
            "threshold": out.threshold,
            "reject_any": out.reject_any,
            "B": B,
            "n": sample.n,
            "d": sample.d,
            "seed": args.seed,
            "elapsed_ms": elapsed_ms,
        }
    )
    return 0


def _scenario_from_dict(raw: dict, budget: int) -> ScenarioConfig:
    guard = CostGuard(max_elementary_terms=int(raw.pop("budget", budget)))
    return ScenarioConfig(
        example=raw["example"],
        hypothesis=raw["hypothesis"],
        n=int(raw["n"]),
        reps=int(raw["reps"]),
        measures=tuple(raw["measures"]),
        seed=int(raw.get("seed", 0)),
        alpha=float(raw.get("alpha", 0.1)),
        d=raw.get("d"),
        block_dim=raw.get("block_dim"),
        rho=raw.get("rho"),
        B=raw.get("B"),
        guard=guard,
    )


def cmd_simulate(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(exc, DATA_ERROR)
    scenarios = raw if isinstance(raw, list) else [raw]
    try:
        cfgs = [_scenario_from_dict(dict(s), args.budget) for s in scenarios]
    except (KeyError, ValueError, MutualDepError) as exc:
        return _fail(exc, USAGE_ERROR)
    report = None
    for cfg in cfgs:
        part = run_power_study(cfg)
        report = part if report is None else report.merged(part)
    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    written = []
    ext = {"csv": ".csv", "markdown": ".md", "json": ".json"}
    try:
        for fmt in formats:
            path = args.out + ext.get(fmt, "." + fmt)
            with open(path, "w") as fh:
                fh.write(emit_report(report, fmt))
            written.append(path)
    except MutualDepError as exc:
        return _fail(exc, USAGE_ERROR)
    skipped = [
        {"measure": c.measure, "n": c.n, "d": c.d, "note": c.note}
        for c in report.cells
        if c.skipped
    ]
    _emit({"written": written, "cells": len(report.cells), "skipped": skipped})
    return 0


def cmd_demo_ff(args) -> int:
    path = args.input if args.input else str(bundled_factors_path())
    try:
        matrix, names = parse_fama_french(path)
    except (MutualDepError, OSError) as exc:
        return _fail(exc, DATA_ERROR)
    sample = make_sample(matrix, (1, 1, 1))
    corr = np.corrcoef(matrix.T)
    correlations = {
        f"{names[0]},{names[1]}": float(corr[0, 1]),
        f"{names[0]},{names[2]}": float(corr[0, 2]),
        f"{names[1]},{names[2]}": float(corr[1, 2]),
    }
    B = args.B if args.B is not None else adaptive_B(sample.n)
    plan = PermutationPlan(B=B, seed=args.seed)
    mutual = {}
    for name in ("q_star", "j_star", "i_star", "r_asym", "s_sym"):
        out = permutation_test(sample, name, plan)
        mutual[name] = {"statistic": out.observed, "p_value": out.p_value}
    pw = pairwise_bonferroni(sample, args.alpha, plan)
    _emit(
        {
            "source": path,
            "n": sample.n,
            "columns": names,
            "correlations": correlations,
            "B": B,
            "alpha": args.alpha,
            "seed": args.seed,
            "mutual_tests": mutual,
            "pairwise_tests": [
                {
                    "pair": f"{names[i]},{names[j]}",
                    "statistic": o.observed,
                    "p_value": o.p_value,
                }
                for i, j, o in pw.pairs
            ],
            "pairwise_threshold": pw.threshold,
            "pairwise_reject_any": pw.reject_any,
        }
    )
    return 0


def _add_common(p: argparse.ArgumentParser, with_input: bool = True) -> None:
    if with_input:
        p.add_argument("--input", required=True, help="path to a numeric CSV file")
        p.add_argument(
            "--blocks",
            required=True,
            help='block spec: widths "5,5" or ranges "cols=1-5;6-10"',
        )
        head = p.add_mutually_exclusive_group()
        head.add_argument("--header", dest="header", action="store_true", default=True)
        head.add_argument("--no-header", dest="header", action="store_false")
    p.add_argument("--B", type=int, default=None, help="replicates (default: adaptive)")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=_default_budget())
    p.add_argument("--parallel", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mutualdep",
        description="Mutual dependence measures and permutation tests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="one statistic + permutation p-value")
    _add_common(p_test)
    p_test.add_argument(
        "--measure",
        required=True,
        help="dcov_sq|q_complete|q_star|r_asym|s_sym|j_asym|i_sym|j_star|i_star|u3_plugin|hl_tau|hl_rho",
    )
    p_test.set_defaults(func=cmd_test)

    p_pw = sub.add_parser("pairwise", help="Bonferroni-corrected pairwise tests")
    _add_common(p_pw)
    p_pw.set_defaults(func=cmd_pairwise)

    p_sim = sub.add_parser("simulate", help="size/power study from a JSON config")
    p_sim.add_argument("--config", required=True, help="JSON scenario (or list)")
    p_sim.add_argument("--out", required=True, help="output path prefix")
    p_sim.add_argument("--format", default="csv,markdown", help="comma list: csv,markdown,json")
    p_sim.add_argument("--budget", type=int, default=_default_budget())
    p_sim.set_defaults(func=cmd_simulate)

    p_ff = sub.add_parser("demo-ff", help="annual-factors demo on the bundled fixture")
    p_ff.add_argument("--input", default=None, help="factors file (default: bundled)")
    _add_common(p_ff, with_input=False)
    p_ff.set_defaults(func=cmd_demo_ff)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
