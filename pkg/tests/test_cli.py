import json
import os
import subprocess
import sys

import pytest

from bjlab.cli import cli_main


def run(capsys, *argv):
    code = cli_main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_space_new_and_info(tmp_path, capsys):
    path = str(tmp_path / "linf2.json")
    code, data = run(capsys, "space", "new", "--vertices", "1,1;1,-1", "--out", path)
    assert code == 0 and os.path.exists(path) and data["dim"] == 2
    code, info = run(capsys, "space", "info", "--space", path)
    assert code == 0 and info["vertices"] == 4 and info["facets"] == 4 and info["faces"] == 8
    code, dual = run(capsys, "space", "dual", "--space", path)
    assert sorted(map(tuple, dual["vertices"])) == sorted([("1", "0"), ("-1", "0"), ("0", "1"), ("0", "-1")])


def test_faces_and_smooth_order(capsys):
    code, data = run(capsys, "faces", "--space", "linf3")
    assert code == 0 and [len(data["faces"][k]) for k in ("0", "1", "2")] == [8, 12, 6]
    code, data = run(capsys, "smooth-order", "--space", "linf3", "1,1,0")
    assert data["order"] == 2 and data["minimal_face"]["dim"] == 1


def test_ortho_check(capsys):
    code, data = run(capsys, "ortho", "check", "--space", "linf2", "--u", "1,1", "--v", "1,-1")
    assert code == 0
    assert data["bj"] is True and data["rho"] is True and data["rho_plus"] is False
    code, data = run(capsys, "ortho", "check", "--space", "linf2", "--u", "1,1", "--v", "1,-1",
                     "--relation", "rho+")
    assert data["verdict"] is False


def test_op_check_isometry(tmp_path, capsys):
    op = tmp_path / "t.json"
    op.write_text(json.dumps({"matrix": [["0", "3"], ["3", "0"]]}))
    code, data = run(capsys, "op", "check-isometry", "--space", "linf2", "--op", str(op))
    assert code == 0 and data["scalar_isometry"] and data["lambda"] == "3"
    code, data = run(capsys, "op", "check-isometry", "--space", "linf2", "--op", "1,1;-1,1")
    assert not data["scalar_isometry"] and data["witness"] is not None


def test_preserve_exit_codes(capsys):
    code, data = run(capsys, "preserve", "at", "--space", "linf2", "--op", "2,0;0,1", "--point", "1,1/2")
    assert code == 0 and data["verdict"]
    code, data = run(capsys, "preserve", "at", "--space", "linf2", "--op", "2,0;0,1", "--point", "1,1")
    assert code == 1 and data["witness"]["functional"] == ["0", "1"]
    code, data = run(capsys, "preserve", "on", "--space", "linf2", "--op", "1,0;0,1", "--points", "1,1;1,0")
    assert code == 0 and len(data["certificates"]) == 2
    code, data = run(capsys, "preserve", "scan", "--space", "linf2", "--op", "2,0;0,1")
    assert code == 1 and data["closure_gaps"]


def test_kset_commands(capsys):
    code, data = run(capsys, "kset", "repro")
    assert code == 0 and data["passed"]
    code, data = run(capsys, "kset", "repro", "--rho-op", "1,0;0,1")
    assert code == 70
    code, data = run(capsys, "kset", "matrix", "--space", "linf2", "--op", "0,3;3,0")
    assert code == 0 and data["scalar_isometry"] and not data["violation"]
    code, data = run(capsys, "kset", "search", "--space", "linf2", "--candidates", "points",
                     "--points", "1,0", "--budget", "300", "--seed", "1")
    assert code == 0 and data["counterexamples"] and data["schema"] == 1


def test_seed_env_override(capsys, monkeypatch):
    args = ["kset", "search", "--space", "l1_2", "--budget", "200", "--no-timing"]
    monkeypatch.setenv("BJLAB_SEED", "9")
    _, a = run(capsys, *args, "--seed", "1")
    monkeypatch.delenv("BJLAB_SEED")
    _, b = run(capsys, *args, "--seed", "9")
    assert a == b and a["config"]["seed"] == 9


def test_error_exit_codes(tmp_path, capsys):
    assert cli_main(["nosuch"]) == 64
    assert cli_main(["preserve", "at", "--space", "linf2"]) == 64
    assert cli_main(["space", "new"]) == 64
    assert cli_main(["space", "info", "--space", "no-such-space"]) == 65
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert cli_main(["space", "info", "--space", str(bad)]) == 65
    assert cli_main(["smooth-order", "--space", "linf2", "0,0"]) == 65
    assert cli_main(["preserve", "at", "--space", "linf2", "--op", "1,0;0,1", "--point", "1,2,3"]) == 65
    assert cli_main(["kset", "search", "--space", "linf2", "--candidates", "points"]) == 65
    capsys.readouterr()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "bjlab", "ortho", "check", "--space", "linf2",
                          "--u", "1,1", "--v", "1,-1"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["bj"] is True
