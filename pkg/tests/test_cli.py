import subprocess
import sys

import pytest

from helpers import structure, verified
from hypgrp.cli import main
from hypgrp.io import load_report, save_fsa


def test_fsa_eq_identical_files(tmp_path, capsys):
    W = structure("G1").W
    save_fsa(W, tmp_path / "a.fsa")
    save_fsa(W, tmp_path / "b.fsa")
    assert main(["fsa", "eq", str(tmp_path / "a.fsa"), str(tmp_path / "b.fsa")]) == 0


def test_fsa_eq_reports_witness(tmp_path, capsys):
    # geodesics strictly contain the short-lex normal forms
    save_fsa(structure("G1").W, tmp_path / "w.fsa")
    save_fsa(verified("G1").GW_final, tmp_path / "gw.fsa")
    assert main(["fsa", "eq", str(tmp_path / "w.fsa"), str(tmp_path / "gw.fsa")]) == 2
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("> ") for line in lines)
    assert main(["fsa", "eq", str(tmp_path / "gw.fsa"), str(tmp_path / "w.fsa")]) == 2


def test_fsa_bad_file_exits_1(tmp_path, capsys):
    (tmp_path / "bad.fsa").write_text("fsa v1\narity: 1\nalphabet: a A\npadding: _\n"
                                      "states: 1\ninitial: 1\naccepting: 1\ntrans: 1 a 99\n")
    assert main(["fsa", "info", str(tmp_path / "bad.fsa")]) == 1
    assert "line 8" in capsys.readouterr().err


def test_verify_z2_is_inconclusive(capsys):
    assert main(["verify", "Z2", "--max-iter", "5", "--quiet"]) == 2


def test_kb_writes_rules(tmp_path, capsys):
    assert main(["kb", "G1", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "rules.txt").read_text()
    assert text.startswith("confluent: true")
    assert text.count("rule:") == 16


def test_oracle_command(tmp_path, capsys):
    assert main(["oracle", "F2", "--radius", "3", "--bigons", "--triangles",
                 "--out", str(tmp_path)]) == 0
    rep = load_report(tmp_path / "oracle_report.txt")
    assert rep["vertices"] == "53"


def test_pipeline_and_resume(tmp_path, capsys):
    out = tmp_path / "run"
    args = ["pipeline", "G1", "--out", str(out), "--stages", "kb,autstruct,verify", "--quiet"]
    assert main(args) == 0
    manifest = load_report(out / "manifest.txt")
    assert manifest["stage.verify"] == "halted"
    rep = load_report(out / "verify_report.txt")
    assert rep["halted"] == "true" and rep["n_final"] == "1"
    before = {p.name: p.read_bytes() for p in out.iterdir()}
    assert main(args) == 0
    after = {p.name: p.read_bytes() for p in out.iterdir()}
    assert before == after


def test_pipeline_needs_out(capsys):
    with pytest.raises(SystemExit):
        main(["pipeline", "G1"])


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "hypgrp.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip().endswith("0.1.0")
