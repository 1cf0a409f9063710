"""Seeded Monte-Carlo sweeps with CSV/JSON output.

A run expands ``config.grid`` (a mapping of parameter name to list of
values) into cells, the cartesian product in sorted-key order. Trial ``t``
of cell ``c`` uses ``RngStream(master_seed, derive_seed(master_seed, c, t))``;
sub-streams for graph sampling, search and set sampling are children 0, 1
and 2 of that stream. Records are sorted by ``(cell, trial)`` before writing,
so the output does not depend on the worker count.

Outputs in ``config.out``: ``trials.csv`` (one row per trial),
``summary.json`` (per-cell frequencies and Wilson intervals) and
``timing.json`` (wall-clock only; excluded from the reproducibility
guarantee). The ``bounds`` kind writes ``bounds.csv`` instead of trials.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import json
import math
import runpy
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Optional

import numpy as np

from . import bounds as B
from .channel_assign import ChannelScenario, fading_from_json, simulate_assignment
from .hamilton import SearchBudget, exclusion_experiment, pivot_generations, run_search
from .matching import bootstrap_trial
from .prob_model import (GoodnessParams, Homogeneous, NicenessParams, build_assignment,
                         check_good, check_nice, family_from_json, family_to_json,
                         fit_good_constants, validate_family)
from .rng import RngStream, derive_seed
from .sampler import expansion_statistics, sample_graph
from .stats import proportion

SCHEMA_VERSION = 1

KINDS = ("ham_frequency", "per_frequency", "expansion", "pivots", "exclusion",
         "channel", "bounds", "check")

# which boolean outcome each kind summarizes as its headline frequency
HEADLINE = {
    "ham_frequency": "hamiltonian",
    "per_frequency": "perfect",
    "expansion": "all_in_interval",
    "pivots": "p1_in_interval",
    "exclusion": "adjacent_to_pivot",
    "channel": "success",
}

# bound tables only: admissible constants are far below where frequencies move
PRESETS = {
    "theorem_regime": {
        "kind": "bounds",
        "grid": {"n": [1024, 4096, 16384, 65536], "C": [0.1], "k": [1, 2]},
        "params": {"c1": 1.0, "c2": 1.0, "alpha": 1e-6},
    },
}

GRID_KEYS = {"n", "p", "C", "k", "lambda", "alpha", "c1", "c2", "beta", "d1", "d2", "l", "s"}


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


@dataclass
class ExperimentConfig:
    kind: str
    grid: dict
    trials: int = 1
    master_seed: int = 0
    family: Optional[dict] = None
    params: dict = field(default_factory=dict)
    budget: dict = field(default_factory=dict)
    out: str = "out"
    threads: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config: expected a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        extra = sorted(set(d) - known)
        if extra:
            raise ConfigError(f"config: unknown field(s) {', '.join(extra)}")
        if "kind" not in d:
            raise ConfigError("config.kind: missing")
        cfg = cls(**{k: v for k, v in d.items()})
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(d)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "grid": self.grid, "trials": self.trials,
                "master_seed": self.master_seed, "family": self.family, "params": self.params,
                "budget": self.budget}

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"config.kind: {self.kind!r} is not one of {', '.join(KINDS)}")
        if not isinstance(self.grid, dict) or not self.grid:
            raise ConfigError("config.grid: must be a non-empty object of parameter lists")
        for key, vals in self.grid.items():
            if key not in GRID_KEYS:
                raise ConfigError(f"config.grid.{key}: unknown grid parameter")
            if not isinstance(vals, list) or not vals:
                raise ConfigError(f"config.grid.{key}: must be a non-empty list")
        if self.kind != "bounds" and "n" not in self.grid:
            raise ConfigError("config.grid.n: required")
        for n in self.grid.get("n", []):
            if not isinstance(n, int) or n < 2:
                raise ConfigError(f"config.grid.n: {n!r} is not an integer >= 2")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("config.trials: must be an integer >= 1")
        if not isinstance(self.master_seed, int):
            raise ConfigError("config.master_seed: must be an integer")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError("config.threads: must be an integer >= 1")
        if self.family is not None and self.kind != "channel":
            for cell in self.cells():
                try:
                    fam = family_from_json(_resolved_family(self.family, cell_probability(cell, self.params)))
                    validate_family(fam, cell["n"])
                except (ValueError, TypeError, KeyError) as exc:
                    raise ConfigError(f"config.family: {exc}") from None
        if self.kind == "channel":
            try:
                fading_from_json(self.params.get("fading", {"kind": "exponential", "rate": 1.0}))
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"config.params.fading: {exc}") from None
            if "lambda" not in self.grid and "lambda_rule" not in self.params:
                raise ConfigError("config.grid.lambda: required for channel runs (or params.lambda_rule)")
        try:
            SearchBudget(**{k: v for k, v in self.budget.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config.budget: {exc}") from None

    def cells(self) -> list:
        keys = sorted(self.grid)
        return [dict(zip(keys, combo)) for combo in itertools.product(*(self.grid[k] for k in keys))]


# ---------------------------------------------------------------------------
# Cell resolution
# ---------------------------------------------------------------------------

def cell_probability(cell: dict, params: dict) -> Optional[float]:
    """Edge probability for a cell: explicit ``p``, else ``C n^{-k/(k+1)}``,
    else the ``log_over_sqrt`` rule ``log(n)/sqrt(n)``; None if unspecified."""
    n = cell.get("n")
    if "p" in cell:
        return float(cell["p"])
    if "C" in cell:
        k = cell.get("k", params.get("k", 1))
        return float(cell["C"]) * n ** (-k / (k + 1))
    if params.get("p_rule") == "log_over_sqrt":
        return math.log(n) / math.sqrt(n)
    return None


def cell_lambda(cell: dict, params: dict) -> float:
    if "lambda" in cell:
        return float(cell["lambda"])
    if params.get("lambda_rule") == "boundary":
        n = cell["n"]
        return math.log(math.sqrt(n) / math.log(n))
    raise ConfigError("config.grid.lambda: missing")


def _resolved_family(family: Optional[dict], p: Optional[float]) -> dict:
    if family is None:
        if p is None:
            raise ConfigError("config.family: no family and no edge probability in the grid")
        return family_to_json(Homogeneous(p))
    fam = family_from_json(family)
    if p is not None:
        if not hasattr(fam, "p"):
            raise ConfigError(f"config.grid.p: family {fam.family!r} has no p to override")
        fam = dataclasses.replace(fam, p=p)
    return family_to_json(fam)


@lru_cache(maxsize=4)
def _assignment(family_key: str, n: int, seed: int):
    return build_assignment(family_from_json(family_key), n, seed)


def _budget(budget: dict, stream: RngStream) -> SearchBudget:
    return SearchBudget(rng=stream, **budget)


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------

def _trial(task) -> dict:
    kind, ci, ti, cell, family_key, params, budget, master_seed = task
    seed = derive_seed(master_seed, ci, ti)
    stream = RngStream(master_seed, seed)
    rec = {"cell": ci, "trial": ti, "seed": seed}
    n = cell["n"]

    if kind == "channel":
        sc = ChannelScenario(n, fading_from_json(params.get("fading", {"kind": "exponential", "rate": 1.0})),
                             cell_lambda(cell, params))
        res = simulate_assignment(sc, stream.child(0))
        rec.update(success=res.success, matched_count=res.matched_count,
                   min_matched_gain=res.min_matched_gain)
        return rec

    a = _assignment(family_key, n, params.get("assignment_seed", 0))

    if kind == "per_frequency":
        rec.update(bootstrap_trial(a, stream.child(0), params.get("pairs_per_trial", 8)))
        return rec

    g = sample_graph(a, stream.child(0))
    rec["edges"] = g.edge_count

    if kind == "ham_frequency":
        res = run_search(g, _budget(budget, stream.child(1)))
        rec.update(hamiltonian=res.hamiltonian, path_length=res.path.length,
                   rotations_used=res.rotations_used, restarts_used=res.restarts_used)

    elif kind == "pivots":
        res = run_search(g, _budget(budget, stream.child(1)))
        k = params.get("generations", 2)
        piv = pivot_generations(g, res.path, k)
        p = cell_probability(cell, params) or a.mean_probability()
        c1, c2 = params.get("c1", 1.0), params.get("c2", 1.0)
        iv = B.pivot_interval(n, p, 1, c1, c2)
        counts = piv.counts
        rec.update(path_length=res.path.length, hamiltonian=res.hamiltonian,
                   p1_in_interval=iv["lower"] <= counts[0] <= iv["upper"],
                   p2_ge_p1=len(counts) > 1 and counts[1] >= counts[0],
                   escapes=len(piv.escapes))
        for l, c in enumerate(counts, start=1):
            rec[f"P{l}"] = c

    elif kind == "exclusion":
        j = int(stream.child(2).generator().integers(n))
        rep = exclusion_experiment(g, j, _budget(budget, stream.child(1)), params.get("generations", 2))
        rec.update(j=j, path_length=rep.path_length, hamiltonian_in_gj=rep.hamiltonian_in_gj,
                   total_pivots=rep.total_pivots, adjacent_to_pivot=rep.adjacent_to_pivot,
                   adjacent_pivots=rep.adjacent_pivots)

    elif kind == "expansion":
        p = cell_probability(cell, params) or a.mean_probability()
        c1, c2 = params.get("c1", 1.0), params.get("c2", 1.0)
        sizes = params.get("sizes", [1, 2, 4, 8])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rows = expansion_statistics(a, g, sizes, params.get("sets_per_size", 20),
                                        stream.child(2), c1=c1, c2=c2, p=p)
        for row in rows:
            rec[f"frac_s{row.s}"] = row.in_interval_fraction
            rec[f"mean_s{row.s}"] = row.mean
        rec["all_in_interval"] = all(row.in_interval_fraction == 1.0 for row in rows)

    else:
        raise ConfigError(f"config.kind: {kind!r} has no trial function")
    return rec


def _run_tasks(tasks: list, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        out = [_trial(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(_trial, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
    out.sort(key=lambda r: (r["cell"], r["trial"]))
    return out


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


def _write_csv(path: Path, header: list, rows: list) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.write_text(buf.getvalue())


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n")


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def _summarize(kind: str, cells: list, records: list, resolved: list) -> list:
    out = []
    for ci, cell in enumerate(cells):
        recs = [r for r in records if r["cell"] == ci]
        entry = {"cell": ci, "params": cell, "trials": len(recs)}
        if resolved[ci] is not None:
            entry["family"] = resolved[ci]
        head = HEADLINE[kind]
        wins = sum(bool(r[head]) for r in recs)
        entry["event"] = head
        entry.update(proportion(wins, len(recs)))
        means = {}
        for key in recs[0]:
            if key in ("cell", "trial", "seed", head):
                continue
            vals = [r[key] for r in recs]
            if all(isinstance(v, (bool, np.bool_)) for v in vals):
                means[key] = proportion(sum(bool(v) for v in vals), len(vals))
            elif all(isinstance(v, (int, float, np.integer, np.floating)) for v in vals):
                arr = np.asarray(vals, dtype=float)
                arr = arr[~np.isnan(arr)]
                means[key] = float(arr.mean()) if arr.size else None
        entry["statistics"] = means
        out.append(entry)
    return out


# ---------------------------------------------------------------------------
# Bounds and checks (no trials)
# ---------------------------------------------------------------------------

def _bounds_rows(cfg: ExperimentConfig) -> tuple:
    rows, reports = [], []
    P = cfg.params
    for ci, cell in enumerate(cfg.cells()):
        label = ";".join(f"{k}={cell[k]}" for k in sorted(cell))
        n = cell.get("n")
        c1, c2 = cell.get("c1", P.get("c1", 1.0)), cell.get("c2", P.get("c2", 1.0))
        p = cell_probability(cell, P) if n is not None else cell.get("p")
        entry = {"cell": ci, "params": cell, "reports": {}}
        if "C" in cell and n is not None:
            tp = B.Theorem1Params(C=cell["C"], k=cell.get("k", P.get("k", 1)), c1=c1, c2=c2,
                                  alpha=cell.get("alpha", P.get("alpha", 1e-6)), n=n)
            entry["reports"]["theorem1"] = B.theorem1_admissible(tp, theta=P.get("theta"))
        if n is not None and p is not None:
            s = cell.get("s", 1)
            entry["reports"]["nout_interval"] = B.expected_nout_interval(n, p, s, c1, c2)
            entry["reports"]["pivot_interval"] = B.pivot_interval(n, p, cell.get("l", 1), c1, c2)
            if 0 < p < 1:
                d1, d2 = cell.get("d1", P.get("d1", 1.0)), cell.get("d2", P.get("d2", 1.0))
                entry["reports"]["theorem2"] = B.theorem2_failure(n, p, d1, d2, D=P.get("D"))
        if "mu" in P and "eta" in P:
            entry["reports"]["chernoff"] = B.BoundReport({"bound": B.chernoff(P["mu"], P["eta"])})
        for name, rep in entry["reports"].items():
            for lab, q, v, ok in rep.rows(label):
                rows.append([lab, f"{name}.{q}", v, ok])
        entry["reports"] = {k: v.to_json() for k, v in entry["reports"].items()}
        reports.append(entry)
    return rows, reports


def _check_cells(cfg: ExperimentConfig) -> tuple:
    P = cfg.params
    rows, out = [], []
    for ci, cell in enumerate(cfg.cells()):
        n = cell["n"]
        p_cell = cell_probability(cell, P)
        fam = _resolved_family(cfg.family, p_cell)
        a = _assignment(json.dumps(fam, sort_keys=True), n, P.get("assignment_seed", 0))
        p_ref = p_cell or P.get("p") or a.mean_probability()
        entry = {"cell": ci, "params": cell, "family": fam, "p_reference": p_ref}
        alpha = cell.get("alpha", P.get("alpha"))
        if alpha is not None:
            c1s, c2s = fit_good_constants(a, alpha, p_ref)
            entry["fit_good"] = {"c1_star": c1s, "c2_star": c2s}
            c1, c2 = cell.get("c1", P.get("c1")), cell.get("c2", P.get("c2"))
            if c1 is not None and c2 is not None:
                entry["good"] = check_good(a, GoodnessParams(alpha, c1, c2, p_ref)).to_json()
        beta = cell.get("beta", P.get("beta"))
        if beta is not None:
            d1, d2 = cell.get("d1", P.get("d1", 1.0)), cell.get("d2", P.get("d2", 1.0))
            entry["nice"] = check_nice(a, NicenessParams(beta, d1, d2, p_ref)).to_json()
        rows.append([ci, n, p_ref, entry.get("fit_good", {}).get("c1_star"),
                     entry.get("fit_good", {}).get("c2_star"),
                     entry.get("good", {}).get("verdict"), entry.get("nice", {}).get("verdict")])
        out.append(entry)
    return rows, out


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def run(config: ExperimentConfig) -> dict:
    """Execute the sweep and write its outputs; returns the summary document."""
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    summary = {"schema_version": SCHEMA_VERSION, "kind": config.kind, "config": config.to_dict()}

    if config.kind == "bounds":
        rows, reports = _bounds_rows(config)
        _write_csv(out / "bounds.csv", ["parameter_set", "quantity", "value", "regime_ok"], rows)
        summary["cells"] = reports
        summary["notes"] = ["theorem constants theta and D are existence-only; headline "
                            "probabilities appear only when supplied in params"]
    elif config.kind == "check":
        rows, reports = _check_cells(config)
        _write_csv(out / "checks.csv", ["cell", "n", "p_reference", "c1_star", "c2_star", "good", "nice"], rows)
        summary["cells"] = reports
    else:
        cells = config.cells()
        tasks, resolved = [], []
        for ci, cell in enumerate(cells):
            if config.kind == "channel":
                fam_key = None
                resolved.append(None)
            else:
                fam = _resolved_family(config.family, cell_probability(cell, config.params))
                fam_key = json.dumps(fam, sort_keys=True)
                resolved.append(fam)
            for ti in range(config.trials):
                tasks.append((config.kind, ci, ti, cell, fam_key, config.params, config.budget,
                              config.master_seed))
        records = _run_tasks(tasks, config.threads)
        param_keys = sorted({k for c in cells for k in c})
        outcome_keys = [k for k in records[0] if k not in ("cell", "trial", "seed")]
        header = ["cell", "trial", "seed"] + param_keys + outcome_keys
        rows = [[r["cell"], r["trial"], r["seed"]] + [cells[r["cell"]].get(k, "") for k in param_keys]
                + [r.get(k, "") for k in outcome_keys] for r in records]
        _write_csv(out / "trials.csv", header, rows)
        summary["cells"] = _summarize(config.kind, cells, records, resolved)
        if config.kind in ("pivots", "exclusion"):
            summary["notes"] = ["pivot counts are relative to the heuristic longest path"]

    _write_json(out / "summary.json", summary)
    _write_json(out / "timing.json", {"seconds": round(time.perf_counter() - t0, 3),
                                      "threads": config.threads})
    return summary


PLOT_TEMPLATE = '''"""Frequency against n with Wilson 95% bars. Regenerate with: python plot.py"""
import json
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

DATA = json.loads({data!r})
OUT = sys.argv[1] if len(sys.argv) > 1 else {svg!r}

plt.rcParams["svg.hashsalt"] = "irgraph"
fig, ax = plt.subplots(figsize=(6, 4))
for series in DATA["series"]:
    xs = [pt["n"] for pt in series["points"]]
    ys = [pt["frequency"] for pt in series["points"]]
    lo = [pt["frequency"] - pt["wilson95"][0] for pt in series["points"]]
    hi = [pt["wilson95"][1] - pt["frequency"] for pt in series["points"]]
    ax.errorbar(xs, ys, yerr=[lo, hi], marker="o", capsize=3, label=series["label"])
ax.set_xlabel("n")
ax.set_ylabel("frequency")
ax.set_ylim(-0.05, 1.05)
if any(len(s["points"]) > 1 for s in DATA["series"]):
    ax.set_xscale("log", base=2)
ax.set_title(DATA["title"])
ax.legend(fontsize="small")
fig.tight_layout()
fig.savefig(OUT, format="svg", metadata={{"Date": None}})
'''


def emit_plots(summary_paths, out_dir) -> tuple:
    """Write ``plot.py`` and ``plot.svg`` (frequency against n) for trial summaries.

    The script embeds its data, so it is self-contained; the SVG is produced
    by running it, with a fixed hash salt and no date so identical summaries
    give identical bytes.
    """
    series = []
    kinds = []
    for path in summary_paths:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"summary file not found: {path}")
        doc = json.loads(path.read_text())
        if "event" not in (doc.get("cells") or [{}])[0]:
            raise ValueError(f"{path}: not a trial summary (kind {doc.get('kind')!r})")
        kinds.append(doc["kind"])
        groups = {}
        for cell in doc["cells"]:
            rest = {k: v for k, v in cell["params"].items() if k != "n"}
            label = doc["kind"] + (" " + ", ".join(f"{k}={v}" for k, v in sorted(rest.items())) if rest else "")
            groups.setdefault(label, []).append(
                {"n": cell["params"]["n"], "frequency": cell["frequency"], "wilson95": cell["wilson95"]})
        for label in sorted(groups):
            series.append({"label": label, "points": sorted(groups[label], key=lambda p: p["n"])})
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = {"title": ", ".join(sorted(set(kinds))), "series": series}
    script = out / "plot.py"
    svg = out / "plot.svg"
    script.write_text(PLOT_TEMPLATE.format(data=json.dumps(data, sort_keys=True), svg="plot.svg"))
    argv = sys.argv
    try:
        sys.argv = [str(script), str(svg)]
        runpy.run_path(str(script), run_name="__main__")
    finally:
        sys.argv = argv
        import matplotlib.pyplot as plt
        plt.close("all")
    return script, svg
