"""Command line entry point: ``irgraph <subcommand> [options]``.

Exit codes: 0 on success, 2 on configuration errors, 3 on runtime failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .harness import PRESETS, ConfigError, ExperimentConfig, emit_plots, run
from .prob_model import Homogeneous, build_assignment, family_from_json
from .rng import RngStream
from .sampler import sample_graph

log = logging.getLogger("irgraph")

SUBCOMMAND_KIND = {
    "check": "check",
    "ham": "ham_frequency",
    "match": "per_frequency",
    "pivots": "pivots",
    "exclude": "exclusion",
    "bounds": "bounds",
    "channel": "channel",
    "sample": "expansion",
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--trials", type=int, default=None, help="trials per grid cell")
    p.add_argument("--out", default=None, help="output directory (or file for sample)")
    p.add_argument("--threads", type=int, default=None, help="worker processes")
    p.add_argument("--config", default=None, help="JSON experiment config file")


def _grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, nargs="+", help="vertex counts")
    p.add_argument("--p", type=float, nargs="+", help="edge probabilities")
    p.add_argument("--C", type=float, nargs="+", help="p = C n^(-k/(k+1))")
    p.add_argument("--k", type=int, nargs="+", help="exponent integer k")
    p.add_argument("--p-rule", choices=["log_over_sqrt"], help="p = log(n)/sqrt(n)")
    p.add_argument("--family", help="assignment family as JSON, e.g. '{\"family\": \"homogeneous\", \"p\": 0.1}'")


def _search(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-restarts", type=int)
    p.add_argument("--max-rotations", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a graph (edge list) or run the expansion experiment")
    _common(p); _grid(p)
    p.add_argument("--sizes", type=int, nargs="+", help="set sizes: run the expansion experiment")
    p.add_argument("--sets-per-size", type=int)
    p.add_argument("--c1", type=float)
    p.add_argument("--c2", type=float)

    p = sub.add_parser("check", help="check goodness / niceness of an assignment")
    _common(p); _grid(p)
    p.add_argument("--matrix", help="assignment matrix file (first line n, then n rows)")
    for name in ("alpha", "c1", "c2", "beta", "d1", "d2"):
        p.add_argument(f"--{name}", type=float)

    p = sub.add_parser("ham", help="Hamiltonian path frequency sweep")
    _common(p); _grid(p); _search(p)

    p = sub.add_parser("match", help="bipartite perfect matching frequency sweep")
    _common(p); _grid(p)
    p.add_argument("--pairs-per-trial", type=int)

    p = sub.add_parser("pivots", help="pivot generation statistics")
    _common(p); _grid(p); _search(p)
    p.add_argument("--generations", type=int)

    p = sub.add_parser("exclude", help="single-vertex exclusion experiment")
    _common(p); _grid(p); _search(p)
    p.add_argument("--generations", type=int)

    p = sub.add_parser("bounds", help="tabulate closed-form bounds as CSV")
    _common(p); _grid(p)
    for name in ("alpha", "c1", "c2", "d1", "d2", "theta", "D"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--preset", choices=sorted(PRESETS), help="start from a named bound table")

    p = sub.add_parser("channel", help="channel assignment success sweep")
    _common(p)
    p.add_argument("--n", type=int, nargs="+")
    p.add_argument("--lambda", dest="lam", type=float, nargs="+")
    p.add_argument("--lambda-rule", choices=["boundary"], help="lambda = ln(sqrt(n)/log n)")
    p.add_argument("--fading", help="fading model JSON, default {\"kind\": \"exponential\", \"rate\": 1}")

    p = sub.add_parser("plot", help="plot frequency-vs-n from summary files")
    p.add_argument("summaries", nargs="+")
    p.add_argument("--out", default="plots")
    return parser


def _load_config(args, kind: str) -> ExperimentConfig:
    base = {"kind": kind, "grid": {}}
    if getattr(args, "preset", None):
        base.update(json.loads(json.dumps(PRESETS[args.preset])))
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"--config: {exc}") from None
        try:
            loaded = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(loaded, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
        if loaded.get("kind", kind) != kind:
            raise ConfigError(f"{args.config}: kind {loaded['kind']!r} does not match subcommand ({kind!r})")
        base.update(loaded)
    grid = dict(base.get("grid") or {})
    params = dict(base.get("params") or {})
    budget = dict(base.get("budget") or {})

    for flag, key in (("n", "n"), ("p", "p"), ("C", "C"), ("k", "k"), ("lam", "lambda")):
        val = getattr(args, flag, None)
        if val is not None:
            grid[key] = val
    if getattr(args, "p_rule", None):
        params["p_rule"] = args.p_rule
    if getattr(args, "lambda_rule", None):
        params["lambda_rule"] = args.lambda_rule
    if getattr(args, "family", None):
        try:
            base["family"] = json.loads(args.family)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--family: invalid JSON: {exc.msg}") from None
    if getattr(args, "fading", None):
        try:
            params["fading"] = json.loads(args.fading)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--fading: invalid JSON: {exc.msg}") from None
    for name in ("alpha", "c1", "c2", "beta", "d1", "d2", "theta", "D", "generations",
                 "pairs_per_trial", "sets_per_size"):
        val = getattr(args, name, None)
        if val is not None:
            params[name] = val
    if getattr(args, "sizes", None):
        params["sizes"] = args.sizes
    if getattr(args, "max_restarts", None) is not None:
        budget["max_restarts"] = args.max_restarts
    if getattr(args, "max_rotations", None) is not None:
        budget["max_rotations"] = args.max_rotations

    base.update(grid=grid, params=params, budget=budget)
    if args.seed is not None:
        base["master_seed"] = args.seed
    if args.trials is not None:
        base["trials"] = args.trials
    if args.threads is not None:
        base["threads"] = args.threads
    if args.out is not None:
        base["out"] = args.out
    return ExperimentConfig.from_dict(base)


def _sample_edgelist(args) -> None:
    if not args.n or len(args.n) != 1:
        raise ConfigError("--n: sample needs exactly one vertex count")
    n = args.n[0]
    if args.family:
        try:
            fam = family_from_json(args.family)
        except ValueError as exc:
            raise ConfigError(f"--family: {exc}") from None
    elif args.p and len(args.p) == 1:
        fam = Homogeneous(args.p[0])
    else:
        raise ConfigError("--p: give one edge probability or --family")
    a = build_assignment(fam, n, 0)
    g = sample_graph(a, RngStream(args.seed or 0))
    text = g.to_edgelist()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_matrix(args) -> None:
    from .prob_model import (GoodnessParams, NicenessParams, ProbabilityAssignment, check_good,
                             check_nice, fit_good_constants)
    try:
        a = ProbabilityAssignment.load(args.matrix)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"--matrix: {exc}") from None
    p = args.p[0] if args.p else a.mean_probability()
    out = {"n": a.n, "p_reference": p}
    if args.alpha is not None:
        c1s, c2s = fit_good_constants(a, args.alpha, p)
        out["fit_good"] = {"c1_star": c1s, "c2_star": c2s}
        if args.c1 is not None and args.c2 is not None:
            out["good"] = check_good(a, GoodnessParams(args.alpha, args.c1, args.c2, p)).to_json()
    if args.beta is not None:
        out["nice"] = check_nice(a, NicenessParams(args.beta, args.d1 or 1.0, args.d2 or 1.0, p)).to_json()
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "summary.json").write_text(text)
    sys.stdout.write(text)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plot":
            script, svg = emit_plots(args.summaries, args.out)
            log.info("wrote %s and %s", script, svg)
            return 0
        if args.command == "sample" and not args.sizes and not args.config:
            _sample_edgelist(args)
            return 0
        if args.command == "check" and args.matrix:
            _check_matrix(args)
            return 0
        cfg = _load_config(args, SUBCOMMAND_KIND[args.command])
        summary = run(cfg)
        for cell in summary.get("cells", []):
            if "frequency" in cell:
                lo, hi = cell["wilson95"]
                log.info("%s %s: %s = %.4f [%.4f, %.4f] over %d trials", cfg.kind, cell["params"],
                         cell["event"], cell["frequency"], lo, hi, cell["trials"])
        log.info("outputs in %s", cfg.out)
        return 0
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return 2
    except FileNotFoundError as exc:
        log.error("error: %s", exc)
        return 3
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code 3
        log.error("runtime failure: %s: %s", type(exc).__name__, exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
