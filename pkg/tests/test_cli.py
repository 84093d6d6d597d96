import filecmp
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from nzalex.cli import main

from conftest import FIXTURES, fixture

PACKAGED = Path(__file__).resolve().parents[1] / "src" / "nzalex" / "fixtures"


def run(*args):
    return subprocess.run([sys.executable, "-m", "nzalex.cli", *args], capture_output=True, text=True)


def run_json(*args):
    proc = run(*args, "--json")
    return proc.returncode, json.loads(proc.stdout)


def test_info():
    code, out = run_json("info", fixture("fig8.tri"))
    assert code == 0 and out["ok"]
    assert out["outputs"]["num_tets"] == 2
    assert [e["valence"] for e in out["outputs"]["edge_classes"]] == [6, 6]
    code, out = run_json("info", fixture("k8_2.tri"))
    assert out["outputs"]["num_tets"] == 6


@pytest.mark.parametrize("name, code", [("nope.tri", 2), ("fig8_unordered.tri", 3)])
def test_exit_codes(name, code):
    assert main(["alexander", str(FIXTURES / name)]) == code


def test_not_orderable_exits_3():
    assert main(["alexander", str(fixture("not_orderable.tri")), "--order"]) == 3


def test_malformed_exits_2(tmp_path):
    bad = tmp_path / "bad.tri"
    bad.write_text("tets 1\ntet 0: nbrs 0 0 0 oops\n")
    proc = run("info", str(bad), "--json")
    assert proc.returncode == 2
    assert "error" in json.loads(proc.stdout)


def test_order_flag():
    code, out = run_json("alexander", fixture("fig8_unordered.tri"), "--order")
    assert code == 0
    assert out["warnings"]
    assert out["outputs"]["alexander"] == {"lo": 0, "coeffs": [1, -3, 1]}


def test_json_is_deterministic():
    a = run("alexander", fixture("k8_2.tri"), "--json")
    b = run("alexander", fixture("k8_2.tri"), "--json")
    assert a.returncode == 0 and a.stdout == b.stdout


@pytest.mark.parametrize("spec, key", [("alpha", "matrices_text"), ("raw", "matrices")])
def test_nz_spec(spec, key):
    code, out = run_json("nz", fixture("fig8.tri"), "--spec", spec)
    assert code == 0 and key in out["outputs"]
    assert set(out["outputs"]["matrices"]) >= {"A", "B"}


def test_twisted_builtin():
    code, out = run_json("twisted", fixture("fig8.tri"), "--meridian", "g4", "--builtin", "fig8-geometric")
    assert code == 0
    assert out["outputs"]["twisted_alexander"]["coeffs"] == [1, -4, 1]


def test_selftest_passes():
    proc = run("selftest")
    assert proc.returncode == 0, proc.stdout


def test_selftest_reports_named_failure(tmp_path):
    for name in ("fig8.tri", "k8_2.tri"):
        shutil.copy(FIXTURES / name, tmp_path / name)
    text = (tmp_path / "k8_2.tri").read_text().replace("nbrs 3 4 2 1", "nbrs 3 4 1 2")
    (tmp_path / "k8_2.tri").write_text(text)
    proc = run("selftest", "--fixtures", str(tmp_path), "--json")
    assert proc.returncode == 1
    failed = [r["name"] for r in json.loads(proc.stdout)["outputs"]["results"]
              if not r["ok"] and not r["known_discrepancy"]]
    assert failed


def test_packaged_fixtures_match():
    names = sorted(p.name for p in FIXTURES.glob("*.tri"))
    assert names == sorted(p.name for p in PACKAGED.glob("*.tri"))
    assert all(filecmp.cmp(FIXTURES / n, PACKAGED / n, shallow=False) for n in names)
