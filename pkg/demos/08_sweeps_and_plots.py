"""
Reproducible sweeps and plots
=============================

The harness expands a parameter grid, runs seeded trials and writes
trials.csv and summary.json. Those two files are byte-identical for a given
config whatever the worker count. The command line tool exposes the same
thing, for example::

    irgraph ham --n 256 512 1024 --C 1 --k 1 --trials 20 --out runs/ham
    irgraph plot runs/ham/summary.json --out runs/plots
"""

import tempfile
from pathlib import Path

from irgraph.harness import ExperimentConfig, emit_plots, run

root = Path(tempfile.mkdtemp(prefix="irgraph-demo-"))
cfg = ExperimentConfig.from_dict({
    "kind": "ham_frequency",
    "grid": {"n": [128, 256, 512], "C": [1.0], "k": [1]},
    "trials": 10,
    "master_seed": 3,
    "out": str(root / "ham"),
})
summary = run(cfg)
for cell in summary["cells"]:
    print(cell["params"], cell["frequency"], cell["wilson95"])

script, svg = emit_plots([root / "ham" / "summary.json"], root / "plots")
print("plot script:", script)
print("figure:", svg)
