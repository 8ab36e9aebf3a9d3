import json

import numpy as np

from posetsys.cli import main
from posetsys.corpus import demo_names, system_path
from posetsys.fileio import load_system, system_to_dict


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_ok(capsys):
    code, out, _ = _run(capsys, "validate", str(system_path("exLargeEx")))
    assert code == 0
    assert "respect" in out


def test_validate_reports_bad_block(tmp_path, capsys):
    doc = json.loads(system_path("two-node-local-gap").read_text())
    doc["A"] = [[0, 7], [0, 0]]  # block (1,2) is forbidden here
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = _run(capsys, "validate", str(bad))
    assert code == 1
    assert "(1,2)" in out


def test_validate_parse_error_exit_code(tmp_path, capsys):
    doc = json.loads(system_path("two-node-local-gap").read_text())
    doc["A"][0][0] = "1/0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = _run(capsys, "validate", str(bad))
    assert code == 2
    assert "rational" in err
    code2, _, err2 = _run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code2 == 2


def test_analyze_json_and_text(capsys):
    path = str(system_path("kalman-structured-gap"))
    code, out, _ = _run(capsys, "analyze", path)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"system", "reachability", "observability", "duality", "reduction"}
    assert doc["duality"]["ok"] is True
    assert doc["reduction"]["dual_tilde"]["total_dim"] == 1

    code_text, out_text, _ = _run(capsys, "analyze", path, "--text")
    assert code_text == 0
    assert "reachability" in out_text and "duality" in out_text

    code_skip, out_skip, _ = _run(capsys, "analyze", path, "--skip-duality")
    assert code_skip == 0
    assert "duality" not in json.loads(out_skip)


def test_analyze_deterministic(capsys):
    path = str(system_path("exObsEx"))
    _, first, _ = _run(capsys, "analyze", path)
    _, second, _ = _run(capsys, "analyze", path)
    assert first == second


def test_dual_round_trip(tmp_path, capsys):
    src = str(system_path("kalman-structured-gap"))
    d1 = tmp_path / "dual.json"
    d2 = tmp_path / "double.json"
    assert _run(capsys, "dual", src, str(d1))[0] == 0
    assert _run(capsys, "validate", str(d1))[0] == 0
    assert _run(capsys, "dual", str(d1), str(d2))[0] == 0
    normalized = system_to_dict(load_system(src))
    assert json.loads(d2.read_text()) == normalized


def test_reduce_round_trips_through_validate(tmp_path, capsys):
    src = str(system_path("kalman-structured-gap"))
    out = tmp_path / "red.json"
    code, stdout, _ = _run(capsys, "reduce", src, str(out), "--variant", "dual-tilde")
    assert code == 0
    assert "total 1" in stdout
    assert _run(capsys, "validate", str(out))[0] == 0
    reduced = load_system(out)
    assert reduced.state_dim == 1


def test_simulate_and_check_lemma(tmp_path, capsys):
    src = str(system_path("exLargeEx"))
    sig = tmp_path / "sig.txt"
    rng = np.random.default_rng(5)
    lines = []
    for k in range(30):
        vals = rng.uniform(-1, 1, 7)
        lines.append(" ".join([f"{k * 0.01:.4f}"] + [f"{v:.6f}" for v in vals]))
    sig.write_text("\n".join(lines) + "\n")
    out = tmp_path / "traj.txt"
    code, _, err = _run(capsys, "simulate", src, str(sig), "--out", str(out), "--check-lemma")
    assert code == 0
    assert "max deviation" in err
    assert len(out.read_text().strip().splitlines()) == 31
    code2, stdout, _ = _run(capsys, "simulate", src, str(sig), "--steps", "5")
    assert code2 == 0
    assert len(stdout.strip().splitlines()) == 6


def test_demo_list_and_single(capsys):
    code, out, _ = _run(capsys, "demo", "--list")
    assert code == 0
    assert set(out.split()) == set(demo_names())
    code_one, out_one, _ = _run(capsys, "demo", "two-node-local-gap")
    assert code_one == 0
    assert "all corpus checks passed" in out_one


def test_demo_unknown_name(capsys):
    code, _, err = _run(capsys, "demo", "nope")
    assert code == 2
    assert "unknown demo" in err


def test_analyze_reports_strict_chain_and_collapsed_bounds(capsys):
    code, out, _ = _run(capsys, "analyze", str(system_path("exLargeEx")))
    assert code == 0
    doc = json.loads(out)
    dims = [doc["reachability"][k]["dim"]
            for k in ("independent", "floor", "reachable", "ceiling")]
    assert dims == [5, 7, 8, 9]
    assert doc["reachability"]["flags"]["controllable"] is False

    code2, out2, _ = _run(capsys, "analyze", str(system_path("exObsEx")))
    assert code2 == 0
    doc2 = json.loads(out2)
    assert doc2["observability"]["ceiling"] == doc2["observability"]["independent"]
    assert doc2["observability"]["flags"]["observable"] is False
