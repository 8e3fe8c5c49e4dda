import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from qlevy.cli import EXIT_CONVERGENCE, EXIT_OK, EXIT_PRECONDITION, load_schema, main, run

SCEN = Path(__file__).resolve().parents[1] / "scenarios"


def _load(out, prefix):
    return json.loads((out / f"{prefix}.json").read_text())


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_check_relations(tmp_path):
    assert run("check-relations", SCEN / "suq2_relations.yaml", tmp_path) == EXIT_OK
    rep = _load(tmp_path, "check-relations")["report"]
    assert rep["ok"]
    re, im = rep["corner_defect"]
    assert re == pytest.approx(rep["corner_defect_expected"], abs=1e-12) and im == 0


def test_gauss(tmp_path):
    assert run("gauss", SCEN / "suq3_gauss.yaml", tmp_path) == EXIT_OK
    rep = _load(tmp_path, "gauss")["report"]
    assert rep["roundtrip_max_error"] <= 1e-12
    assert rep["offdiagonal_max"] <= 1e-14
    assert rep["no_gc_witness"]["hermitian"] is False


def test_decompose(tmp_path):
    assert run("decompose", SCEN / "suq3_decompose.yaml", tmp_path) == EXIT_OK
    rep = _load(tmp_path, "decompose")["report"]
    assert rep["decomposition"]["dims"] == {"1": 1, "2": 6, "3": 16}


def test_hunt_outputs_and_csv(tmp_path):
    assert run("hunt", SCEN / "suq3_hunt.yaml", tmp_path) == EXIT_OK
    rep = _load(tmp_path, "hunt")["report"]
    assert all(v["ok"] for v in rep["route_agreement"].values())
    assert rep["conditional_positivity_min_eig"] >= -1e-8
    with open(tmp_path / "hunt.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:4] == ["index", "element", "psi_re", "psi_im"]
    assert len(rows) == rep["battery_size"] + 1


def test_hunt_is_byte_stable(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("hunt", SCEN / "uq2_hunt.yaml", a) == EXIT_OK
    assert run("hunt", SCEN / "uq2_hunt.yaml", b) == EXIT_OK
    for name in ("hunt.json", "hunt.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_counterexample_and_semigroup(tmp_path):
    assert run("counterexample", SCEN / "counterexample.yaml", tmp_path) == EXIT_OK
    rep = _load(tmp_path, "counterexample")["report"]
    assert rep["verdict"] == "divergent"
    assert rep["control_verdict"] == "convergent"
    assert run("semigroup", SCEN / "suq2_hunt.yaml", tmp_path) == EXIT_OK
    for row in _load(tmp_path, "semigroup")["report"]["table"]:
        assert row["semigroup_defect"] <= 1e-6
        assert abs(row["normalization"]) <= 1e-10


def test_precondition_exit_and_error_json(tmp_path):
    bad = _write(tmp_path, "bad.yaml", "N: 3\nq: \"3/2\"\n")
    assert run("gauss", bad, tmp_path) == EXIT_PRECONDITION
    err = json.loads((tmp_path / "gauss.error.json").read_text())
    assert err["error"]["exit_code"] == EXIT_PRECONDITION
    assert "q" in err["error"]["message"]
    unknown = _write(tmp_path, "u.yaml", "N: 2\nbogus: 1\n")
    assert run("gauss", unknown, tmp_path) == EXIT_PRECONDITION
    assert run("gauss", tmp_path / "missing.yaml", tmp_path) == EXIT_PRECONDITION


def test_convergence_exit(tmp_path):
    text = (SCEN / "suq3_hunt.yaml").read_text() + "method: p_limit\np_schedule: {m_min: 1, m_max: 3}\n"
    scen = _write(tmp_path, "slow.yaml", text)
    assert run("hunt", scen, tmp_path) == EXIT_CONVERGENCE
    assert (tmp_path / "hunt.error.json").exists()


def test_main_and_schema(tmp_path, capsys):
    assert main(["schema"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == load_schema()
    assert main(["decompose", "--scenario", str(SCEN / "suq3_decompose.yaml"), "--out", str(tmp_path),
                 "--dim", "3"]) == EXIT_OK
    dims = _load(tmp_path, "decompose")["report"]["decomposition"]["dims"]
    assert dims["2"] == 3


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qlevy.cli", "check-relations", "--scenario",
                           str(SCEN / "suq2_relations.yaml"), "--out", str(tmp_path)],
                          capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "check-relations.csv").exists()
