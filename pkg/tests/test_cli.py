import io
import json

import pytest

from combtopo.cli import main
from combtopo.sset import from_complex, sset_to_json, standard_simplex
from combtopo.subdivision import ex


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_of_the_sphere(capsys):
    code, out, _ = run(capsys, "homology", "--complex", "boundary-delta-3", "--k", "2")
    assert code == 0
    res = json.loads(out)["result"]
    assert (res["betti"], res["torsion"]) == (1, [])
    assert res["trusted_through"] is None


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "galleries", "--complex", "two-triangles", "--max-chambers", "3", "--homology", "0")
    second = run(capsys, "galleries", "--complex", "two-triangles", "--max-chambers", "3", "--homology", "0")
    assert first == second
    rep = json.loads(first[1])
    assert rep["result"]["homology"]["betti"] == 1
    assert rep["result"]["homology"]["heuristic"] is True
    assert rep["config"]["max_chambers"] == 3


def test_malformed_json_reports_position(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO('{"vertices": [0, 1],\n "simplices": [[0], [1]'))
    code, _, err = run(capsys, "homology", "--input", "-", "--k", "0")
    assert code == 2
    assert "line 2" in err and "column" in err


def test_trust_cap_exit(capsys, tmp_path):
    path = tmp_path / "ex.json"
    path.write_text(json.dumps(sset_to_json(ex(2, standard_simplex(1), 2))))
    assert run(capsys, "homology", "--input", str(path), "--k", "1")[0] == 0
    code, _, err = run(capsys, "homology", "--input", str(path), "--k", "2")
    assert code == 3 and "trust" in err


def test_complex_from_file(capsys, tmp_path, triangle):
    path = tmp_path / "k.json"
    path.write_text(json.dumps(triangle.to_json()))
    code, out, _ = run(capsys, "sd", "--input", str(path), "--r", "3")
    assert code == 0 and json.loads(out)["result"]["counts"] == [10, 18, 9]


def test_sset_round_trip_through_the_cli(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps(sset_to_json(from_complex(__import__("combtopo").corpus.rp2_6()))))
    code, out, _ = run(capsys, "sset", "--input", str(path))
    assert code == 0 and json.loads(out)["result"]["euler"] == 1


def test_config_file_supplies_flags(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"level": 2, "homology": 0}))
    code, out, _ = run(capsys, "--config", str(cfg), "paths", "--complex", "two-triangles")
    res = json.loads(out)
    assert code == 0
    assert res["config"]["level"] == 2
    assert [lv["paths"] for lv in res["result"]["levels"]] == [0, 3, 315]
    code, out, _ = run(capsys, "--config", str(cfg), "paths", "--complex", "two-triangles", "--level", "1")
    assert json.loads(out)["config"]["level"] == 1


def test_comb_and_coxeter(capsys):
    code, out, _ = run(capsys, "comb", "--complex", "two-triangles", "--max-length", "4", "--homology", "1")
    assert code == 0 and json.loads(out)["result"]["homology"]["levels"][2]["betti"] == 1
    code, out, _ = run(capsys, "coxeter", "--group", "affine-a2", "--n", "1", "--convexity", "--homology")
    res = json.loads(out)["result"]
    assert res["size"] == 13 and res["closure"]["bruhat"]["closed"] and res["convexity"]["ok"]
    assert res["reduced_homology"] == [{"betti": 0, "torsion": []}] * 2


def test_missing_source_and_bad_endpoints(capsys):
    assert run(capsys, "homology", "--k", "0")[0] == 2
    assert run(capsys, "galleries", "--complex", "two-triangles", "--a", "0,x")[0] == 2
    assert run(capsys, "galleries", "--complex", "two-triangles", "--a", "0,3")[0] == 2


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "homotopy")
    rep = json.loads(out)["result"]
    assert code == 0 and rep["status"] == "pass"
    assert "runtime_s" not in rep["checks"][0]
    code, out, _ = run(capsys, "verify", "fiber", "--timings")
    assert code == 0 and "runtime_s" in json.loads(out)["result"]["checks"][0]


def test_verify_reports_failures(capsys):
    code, out, _ = run(capsys, "verify", "subdivision")
    rep = json.loads(out)["result"]
    assert code == 1 and rep["status"] == "fail"
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status["straightening-iso"] == "fail" and status["subdivision-shadow"] == "pass"


def test_unknown_subcommand_exits_with_usage():
    with pytest.raises(SystemExit):
        main(["plot"])
