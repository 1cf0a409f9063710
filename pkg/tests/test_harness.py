import csv
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from irgraph.cli import main
from irgraph.harness import ConfigError, ExperimentConfig, emit_plots, run
from irgraph.stats import proportion, wilson_interval


def cfg(tmp_path, name="out", **kw):
    d = {"kind": "ham_frequency", "grid": {"n": [8]}, "trials": 5, "out": str(tmp_path / name)}
    d.update(kw)
    return ExperimentConfig.from_dict(d)


def files(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir()) if p.name != "timing.json"}


def test_ham_frequency_complete_graph(tmp_path):
    s = run(cfg(tmp_path, family={"family": "homogeneous", "p": 1.0}))
    assert s["cells"][0]["frequency"] == 1.0
    assert s["schema_version"] == 1


def test_per_frequency_empty_graph(tmp_path):
    s = run(cfg(tmp_path, kind="per_frequency", grid={"n": [12]}, family={"family": "homogeneous", "p": 0.0}))
    assert s["cells"][0]["frequency"] == 0.0


def test_trials_csv_layout(tmp_path):
    c = cfg(tmp_path, grid={"n": [8, 10], "p": [0.6]}, trials=3)
    run(c)
    rows = list(csv.reader((tmp_path / "out" / "trials.csv").open()))
    assert rows[0][:5] == ["cell", "trial", "seed", "n", "p"]
    assert [(r[0], r[1]) for r in rows[1:]] == [(str(c), str(t)) for c in range(2) for t in range(3)]


@pytest.mark.parametrize("kind,grid,extra", [
    ("pivots", {"n": [64], "p": [0.2]}, {"params": {"generations": 2}}),
    ("exclusion", {"n": [64], "p": [0.2]}, {}),
    ("expansion", {"n": [200], "p": [0.02]}, {"params": {"sizes": [1, 2]}}),
    ("channel", {"n": [16], "lambda": [0.5, 1.0]}, {}),
    ("per_frequency", {"n": [32], "p": [0.4]}, {}),
])
def test_every_kind_is_reproducible_across_threads(tmp_path, kind, grid, extra):
    a = run(cfg(tmp_path, "a", kind=kind, grid=grid, trials=4, **extra))
    run(cfg(tmp_path, "b", kind=kind, grid=grid, trials=4, threads=2, **extra))
    assert files(tmp_path / "a") == files(tmp_path / "b")
    for cell in a["cells"]:
        lo, hi = cell["wilson95"]
        assert 0 <= lo <= cell["frequency"] <= hi <= 1


def test_bounds_and_check_kinds(tmp_path):
    s = run(cfg(tmp_path, kind="bounds", grid={"n": [4096], "C": [0.1, 1.0], "k": [1]}))
    t1 = s["cells"][0]["reports"]["theorem1"]
    assert t1["values"]["alpha_max"] == pytest.approx(1.5625e-4)
    assert (tmp_path / "out" / "bounds.csv").read_text().startswith("parameter_set,quantity,value,regime_ok\n")
    s = run(cfg(tmp_path, "c", kind="check", grid={"n": [8], "p": [0.3]},
                params={"alpha": 0.5, "c1": 1.0, "c2": 1.0, "beta": 0.25}))
    assert s["cells"][0]["good"]["verdict"] == "Holds"


@pytest.mark.parametrize("bad,field", [
    ({"kind": "nope"}, "config.kind"),
    ({"grid": {}}, "config.grid"),
    ({"grid": {"n": [1]}}, "config.grid.n"),
    ({"grid": {"q": [1]}}, "config.grid.q"),
    ({"trials": 0}, "config.trials"),
    ({"budget": {"max_restarts": -1}}, "config.budget"),
    ({"family": {"family": "homogeneous", "p": 2}}, "config.family"),
    ({"colour": 1}, "unknown field"),
])
def test_config_errors_name_the_field(tmp_path, bad, field):
    d = {"kind": "ham_frequency", "grid": {"n": [8]}, "out": str(tmp_path)}
    d.update(bad)
    with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
        ExperimentConfig.from_dict(d)


def test_from_json_reports_position():
    with pytest.raises(ConfigError, match="line 2, column"):
        ExperimentConfig.from_json('{"kind": "ham_frequency",\n  "grid": }')


@given(st.integers(1, 500).flatmap(lambda t: st.tuples(st.integers(0, t), st.just(t))))
def test_wilson_contains_frequency(st_pair):
    s, t = st_pair
    lo, hi = wilson_interval(s, t)
    assert 0.0 <= lo <= s / t <= hi <= 1.0
    assert proportion(s, t)["frequency"] == s / t


def test_wilson_reference_value():
    # 8 of 10: centre and half-width from the closed form
    lo, hi = wilson_interval(8, 10)
    assert lo == pytest.approx(0.4901624, abs=1e-6) and hi == pytest.approx(0.9433178, abs=1e-6)


# -- CLI --------------------------------------------------------------------

def test_cli_ham_and_plot(tmp_path):
    out = tmp_path / "ham"
    assert main(["ham", "--n", "16", "32", "--p", "0.5", "--trials", "3", "--seed", "2", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert len(summary["cells"]) == 2
    assert main(["plot", str(out / "summary.json"), "--out", str(tmp_path / "p1")]) == 0
    assert main(["plot", str(out / "summary.json"), "--out", str(tmp_path / "p2")]) == 0
    svg1 = (tmp_path / "p1" / "plot.svg").read_bytes()
    assert svg1 == (tmp_path / "p2" / "plot.svg").read_bytes()
    assert svg1.lstrip().startswith(b"<?xml")


def test_emit_plots_single_point(tmp_path):
    run(cfg(tmp_path, family={"family": "homogeneous", "p": 1.0}))
    script, svg = emit_plots([tmp_path / "out" / "summary.json"], tmp_path / "plots")
    assert script.exists() and svg.exists()


def test_cli_sample_edgelist(tmp_path):
    path = tmp_path / "g.txt"
    assert main(["sample", "--n", "6", "--p", "1.0", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "6 15" and lines[1] == "1 2"


def test_cli_check_matrix(tmp_path, capsys):
    m = tmp_path / "m.txt"
    m.write_text("3\n0 0.5 0.5\n0.5 0 0.5\n0.5 0.5 0\n")
    assert main(["check", "--matrix", str(m), "--alpha", "0.5", "--c1", "1", "--c2", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["good"]["verdict"] == "Holds"


def test_cli_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "ham_frequency", "grid": {"n": [0]}}')
    assert main(["ham", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2
    bad.write_text("{not json")
    assert main(["ham", "--config", str(bad)]) == 2
    assert main(["ham", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["plot", str(tmp_path / "missing.json"), "--out", str(tmp_path / "p")]) == 3
    assert main(["ham", "--n", "8", "--out", str(tmp_path / "y")]) == 2  # no probability


def test_cli_bounds_and_channel(tmp_path):
    assert main(["bounds", "--n", "256", "--p", "0.3466", "--out", str(tmp_path / "b")]) == 0
    assert "theorem2.log_Q" in (tmp_path / "b" / "bounds.csv").read_text()
    assert main(["channel", "--n", "16", "--lambda-rule", "boundary", "--trials", "3",
                 "--out", str(tmp_path / "c")]) == 0


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "irgraph", "bounds", "--n", "100", "--p", "0.5",
                        "--out", str(tmp_path / "m")], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr


def test_cli_theorem_regime_preset(tmp_path):
    assert main(["bounds", "--preset", "theorem_regime", "--out", str(tmp_path / "t")]) == 0
    doc = json.loads((tmp_path / "t" / "summary.json").read_text())
    t1 = [c["reports"]["theorem1"] for c in doc["cells"]]
    assert all(r["regime_ok"] for r in t1)
    assert all(r["values"]["np"] < 100 for r in t1)
    assert "frequency" not in doc["cells"][0]
