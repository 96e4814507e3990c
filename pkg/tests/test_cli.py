import json
import math
import subprocess
import sys

import pytest

from stable_norm_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_surface_commands(capsys):
    code, out, _ = run(capsys, "surface", "--kind", "octagon")
    assert code == 0 and json.loads(out)["relation_residual"] <= 1e-9
    code, out, _ = run(capsys, "surface", "--kind", "giraffe", "--lsep", "0.1")
    assert json.loads(out)["metadata"]["separating_words"] == ["a1 b1 A1 B1"]
    code, out, _ = run(capsys, "surface", "--kind", "flat_torus", "--u", "1,0", "--v", "0,1")
    assert json.loads(out)["area"] == 1.0


def test_surface_construction_error(capsys):
    code, _, err = run(capsys, "surface", "--kind", "giraffe", "--lsep", "0.1", "--torus-params", "2.1,2.1,3,3")
    assert code == 2 and "error" in err


def test_enum_below_systole(capsys):
    code, out, _ = run(capsys, "enum", "--kind", "octagon", "--T", "2.25")
    assert code == 0 and json.loads(out)["classes"] == 0


def test_enum_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "enum", "--kind", "octagon", "--T", "6", "--out", str(a))[0] == 0
    assert run(capsys, "enum", "--kind", "octagon", "--T", "6", "--out", str(b), "--threads", "2")[0] == 0
    assert (a / "catalog.jsonl").read_bytes() == (b / "catalog.jsonl").read_bytes()
    first = json.loads((a / "catalog.jsonl").read_text().splitlines()[0])
    assert first["meta"]["surface"] == {"kind": "octagon"} and first["meta"]["count"] == 88


def test_enum_giraffe_systole(capsys):
    code, out, _ = run(capsys, "enum", "--kind", "giraffe", "--lsep", "0.1", "--T", "6")
    assert code == 0 and json.loads(out)["systole"] == pytest.approx(0.1, abs=1e-9)


def test_count_flat(capsys, tmp_path):
    code, out, _ = run(capsys, "count", "--kind", "flat_torus", "--T", "200", "--out", str(tmp_path))
    res = json.loads(out)
    assert code == 0 and abs(res["fit"]["c"] - math.pi) / math.pi <= 0.03
    assert res["minkowski"]["pass"]
    lines = (tmp_path / "counts.csv").read_text().splitlines()
    assert lines[0] == "T,count,count_over_T2" and lines[-1].startswith("200,125628,")


def test_count_from_catalog_and_gamma(capsys, tmp_path):
    run(capsys, "enum", "--kind", "giraffe", "--T", "7", "--out", str(tmp_path))
    cat = str(tmp_path / "catalog.jsonl")
    code, out, _ = run(capsys, "count", "--catalog", cat)
    assert code == 0 and json.loads(out)["kind"] == "N"
    code, out, _ = run(capsys, "count", "--catalog", cat, "--gamma", "a1")
    res = json.loads(out)
    assert code == 0 and res["kind"] == "N_Gamma" and res["audit"]["genericity_violations"] == 0


def test_count_missing_catalog(capsys, tmp_path):
    code, _, err = run(capsys, "count", "--catalog", str(tmp_path / "none.jsonl"), "--out", str(tmp_path / "o"))
    assert code == 3 and not (tmp_path / "o").exists()


def test_stablenorm_file(capsys, tmp_path):
    code, out, _ = run(capsys, "stablenorm", "--kind", "octagon", "--T", "5", "--out", str(tmp_path))
    res = json.loads(out)
    assert code == 0 and res["stored"] == 51 and res["genericity_violations"] == 4
    rows = (tmp_path / "table.jsonl").read_text().splitlines()
    assert len(rows) == 52
    row = json.loads(rows[1])
    assert set(row) == {"homology", "sn", "witness"}


def test_lattice(capsys, tmp_path):
    sq = tmp_path / "sq.json"
    sq.write_text("[[0,0],[1,0],[1,1],[0,1]]")
    code, out, _ = run(capsys, "lattice", "--region", str(sq), "--t", "10")
    assert code == 0 and "10,121,1.21" in out.splitlines()
    L = tmp_path / "L.json"
    L.write_text('{"polygon": [[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}')
    code, _, _ = run(capsys, "lattice", "--region", str(L), "--t", "10", "--out", str(tmp_path / "o"))
    assert (tmp_path / "o" / "lattice.csv").read_text().splitlines()[0] == "# area=3"


def test_lattice_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[[0,0],\n[1,0")
    code, _, err = run(capsys, "lattice", "--region", str(bad))
    assert code == 2 and "line 2" in err and "column" in err
    bow = tmp_path / "bow.json"
    bow.write_text("[[0,0],[2,2],[2,0],[0,2]]")
    assert run(capsys, "lattice", "--region", str(bow))[0] == 2


def test_giraffe_command(capsys, tmp_path):
    code, out, _ = run(capsys, "giraffe", "--lsep", "0.1", "--T", "7", "--out", str(tmp_path))
    res = json.loads(out)
    assert code == 0 and "pass" in res and res["necks"][0]["feasible"]
    assert json.loads((tmp_path / "giraffe_report.json").read_text())["pass"] == res["pass"]
    code, out2, _ = run(capsys, "giraffe", "--lsep", "0.1", "--T", "7", "--rays", "720")
    res2 = json.loads(out2)
    for a, b, bound in zip(res["areas"], res2["areas"], res["area_bounds"]):
        assert abs(a - b) <= bound


def test_giraffe_on_octagon(capsys):
    code, _, err = run(capsys, "giraffe", "--kind", "octagon", "--T", "5")
    assert code == 4


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"kind": "octagon", "T": 2.0}))
    code, out, _ = run(capsys, "enum", "--config", str(cfg))
    assert json.loads(out)["classes"] == 0
    code, out, _ = run(capsys, "enum", "--config", str(cfg), "--T", "3")
    assert json.loads(out)["classes"] == 8
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "enum", "--config", str(cfg))[0] == 2


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "stable_norm_lab", "surface", "--kind", "octagon"], capture_output=True, text=True)
    assert p.returncode == 0 and '"genus": 2' in p.stdout
