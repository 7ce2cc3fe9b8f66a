import json
from fractions import Fraction
import subprocess
import sys

import pytest

from ccnet import formats
from ccnet.cli import FAIL, OK, USAGE, run_cli
from ccnet.generators import random_topology
from ccnet.instance import complete_graph_edges
from ccnet import Overlay


@pytest.fixture
def topo(tmp_path):
    path = tmp_path / "net.topo"
    path.write_text(formats.format_topology(random_topology(6, 3)))
    return path


def test_distances_and_derive(tmp_path, topo):
    m = tmp_path / "m.json"
    i = tmp_path / "i.json"
    assert run_cli(["distances", str(topo), "-o", str(m)]) == OK
    assert run_cli(["derive", str(m), "-o", str(i)]) == OK
    assert formats.read_instance(i).n == 6


def test_solve_pd_reports_bound(tmp_path, topo, capsys):
    out = tmp_path / "h.txt"
    cert = tmp_path / "c.json"
    rc = run_cli(["solve", str(topo), "--algo", "pd", "--t", "n", "-o", str(out), "--cert", str(cert),
                  "--format", "csv"])
    assert rc == OK
    rows = capsys.readouterr().out.splitlines()
    rec = dict(zip(rows[0].split(","), rows[1].split(",")))
    assert rec["verified"] == "yes" and rec["lower_bound"]
    exact = Fraction(json.loads(cert.read_text())["dual_objective"])
    assert abs(float(exact) - float(Fraction(rec["lower_bound"]))) < 1e-4
    # the serialized overlay re-verifies
    assert run_cli(["verify", str(topo), str(out)]) == OK
    assert run_cli(["verify", str(topo), str(out), "--mode", "witness"]) == OK


def test_verify_full_mesh_exhaustive(tmp_path, capsys):
    topo = tmp_path / "t.topo"
    topo.write_text(formats.format_topology(random_topology(8, 1)))
    ov = tmp_path / "full.txt"
    formats.write_overlay(Overlay(complete_graph_edges(8)), ov)
    assert run_cli(["verify", str(topo), str(ov), "--mode", "exhaustive"]) == OK
    assert "ok" in capsys.readouterr().out


def test_verify_failure(tmp_path, topo, capsys):
    ov = tmp_path / "empty.txt"
    ov.write_text("0 1\n")
    assert run_cli(["verify", str(topo), str(ov)]) == FAIL
    assert "FAILED" in capsys.readouterr().out


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.topo"
    bad.write_text("node 0\nedge 0 1 1\n")
    assert run_cli(["solve", str(bad)]) == USAGE
    assert "bad.topo:2:" in capsys.readouterr().err


def test_usage_errors(tmp_path, topo, monkeypatch):
    assert run_cli([]) == USAGE
    assert run_cli(["solve", str(topo), "--algo", "nope"]) == USAGE
    assert run_cli(["solve", str(topo), "--t", "zero"]) == USAGE
    assert run_cli(["solve", str(tmp_path / "missing.topo")]) == USAGE
    assert run_cli(["gen", "--family", "ug-gap", "--n-ug", "5"]) == USAGE
    monkeypatch.setenv("CCNET_SEED", "abc")
    assert run_cli(["solve", str(topo), "--algo", "pd-sample"]) == USAGE


def test_hier_on_ibgp_is_usage_error(topo):
    assert run_cli(["solve", str(topo), "--algo", "hier"]) == USAGE


def test_infeasible_exit_code(tmp_path):
    inst = tmp_path / "i.json"
    inst.write_text('{"n": 3, "base_edges": [[0, 1]], "demands": [[0, 2]], "safe": {"0,2": [0, 1, 2]}}')
    assert run_cli(["solve", str(inst)]) == FAIL


def test_env_seed(tmp_path, topo, monkeypatch, capsys):
    monkeypatch.setenv("CCNET_SEED", "5")
    assert run_cli(["solve", str(topo), "--algo", "lp-round", "--retries", "3", "--format", "json"]) == OK
    doc = json.loads(capsys.readouterr().out.split("\n# provenance")[0])
    assert doc[0]["seed"] == 5


@pytest.mark.parametrize("family,extra", [("gadget", ["--sets", "1,2;2"]), ("minrep", []),
                                          ("ug-gap", ["--d", "1", "--k", "2"]), ("laminar", []),
                                          ("random-metric", [])])
def test_gen_families(tmp_path, family, extra):
    out = tmp_path / "g.json"
    side = tmp_path / "s.json"
    assert run_cli(["gen", "--family", family, "--seed", "1", "-o", str(out), "--sidecar", str(side)] + extra) == OK
    assert run_cli(["solve", str(out), "--algo", "pd"]) == OK
    assert json.loads(side.read_text())


def _manifest(tmp_path):
    for k in range(3):
        (tmp_path / f"t{k}.topo").write_text(formats.format_topology(random_topology(5 + k, k)))
    man = tmp_path / "manifest.json"
    man.write_text(json.dumps({"instances": [{"name": f"t{k}", "path": f"t{k}.topo", "t": "n"} for k in range(3)]}))
    return man


def test_report_byte_identical(tmp_path):
    man = _manifest(tmp_path)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(["report", str(man), "--format", "csv", "--deterministic", "-o", str(a)]) == OK
    assert run_cli(["report", str(man), "--format", "csv", "--deterministic", "--jobs", "2", "-o", str(b)]) == OK
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "instance,n,full_mesh,solver,value,fraction,verified,runtime_ms,lower_bound"
    assert [l.split(",")[0] for l in lines[1:]] == ["t0", "t1", "t2"]


def test_bad_manifest(tmp_path):
    man = tmp_path / "m.json"
    man.write_text('{"instances": [{"name": "x"}]}')
    assert run_cli(["report", str(man)]) == USAGE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ccnet", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "report" in proc.stdout
