from __future__ import annotations

import json
import subprocess
import sys

import pytest

from threetrans import classify
from threetrans.cli import main, read_config

SMALL = ["--max-n", "5", "--max-f2-n", "5", "--max-points", "200"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fischer_build_json_round_trip(capsys):
    code, out, _ = run(capsys, "fischer", "build", "--construction", "single", "--family", "A", "--rank", "3")
    doc = json.loads(out)
    assert code == 0 and set(doc) == {"version", "family_tag", "points", "edges", "tau"}
    assert len(doc["points"]) == 6


def test_fischer_build_shell_md(capsys):
    code, out, _ = run(capsys, "fischer", "build", "--construction", "single", "--family", "D", "--rank", "4", "--shell", "1", "--format", "md")
    assert code == 0 and "| points | 24 |" in out


def test_matsuo_analyze(capsys):
    code, out, _ = run(capsys, "matsuo", "analyze", "--construction", "signed", "--family", "E", "--rank", "6")
    doc = json.loads(out)
    assert code == 0
    assert doc["dim"] == 72 and doc["quotient_dim"] == 57 and doc["radical_dim"] == 15
    assert doc["central_charge"] == "6"
    assert doc["gram_inertia"] == {"pos": 57, "zero": 15, "neg": 0}
    assert doc["classification"] == "psd_singular"


def test_matsuo_analyze_from_file(capsys, tmp_path):
    _, out, _ = run(capsys, "fischer", "build", "--construction", "o-", "--rank", "3")
    path = tmp_path / "o6.json"
    path.write_text(out)
    code, out, _ = run(capsys, "matsuo", "analyze", "--input", str(path), "--format", "csv")
    assert code == 0 and "classification,positive_definite" in out and "dim,36" in out


def test_griess_verify(capsys):
    code, out, _ = run(capsys, "griess", "verify", "--family", "A", "--rank", "3", "--signs", "minus")
    doc = json.loads(out)
    assert code == 0 and doc["quotient_iso"] is True and doc["signs"] == "minus_only"
    assert doc["eta_c"] == "2" and doc["d"] == 6


def test_griess_verify_both(capsys):
    code, out, _ = run(capsys, "griess", "verify", "--family", "D", "--rank", "5")
    doc = json.loads(out)
    assert code == 0 and (doc["span"], doc["d"], doc["eta_c"]) == (40, 35, None)


def test_bounds_run_cases(capsys):
    code, out, _ = run(capsys, "bounds", "run-cases", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 12
    assert lines[0].startswith("case,I_G,I_H,k_G,k_H,lambda,bound")


def test_reps_admissible(capsys):
    code, out, _ = run(capsys, "reps", "admissible", "--n", "8")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == doc["expected_count"] == 7
    assert {"first": [4], "second": "+", "label": "([4],+)"} in doc["bipartitions"]


def test_reps_admissible_small_n_is_an_error(capsys):
    code, _, err = run(capsys, "reps", "admissible", "--n", "3")
    assert code == 2 and "RankTooSmall" in err


def test_classify_all_small(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "classify", "all", *SMALL, "--out", str(out_file))
    doc = json.loads(out_file.read_text())
    assert code == 0 and out == "" and doc["ok"]
    assert doc["config"]["max_n"] == 5 and len(doc["survivor_table"]) == 11


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# caps\nmax-n = 9\nmax_f2_n=5\nmax-points=200\nformat=md\n")
    code, out, _ = run(capsys, "classify", "all", "--config", str(cfg), "--max-n", "5")
    assert code == 0 and out.startswith("| group |")
    assert "S_6" in out and "S_7" not in out


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("max_q = 3\n")
    with pytest.raises(SystemExit):
        main(["classify", "all", "--config", str(cfg)])


def test_read_config(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("a-b = 1  # note\n\nc=x\n")
    assert read_config(str(cfg)) == {"a_b": "1", "c": "x"}
    cfg.write_text("nonsense\n")
    with pytest.raises(SystemExit):
        read_config(str(cfg))


def test_classify_reports_mismatches(capsys, monkeypatch):
    real = classify.classify_all

    def broken(cfg):
        rep = real(cfg)
        rep["problems"] = ["S_3: c is 1, expected 6/5"]
        return rep

    monkeypatch.setattr(classify, "classify_all", broken)
    code, _, err = run(capsys, "classify", "all", *SMALL)
    assert code == 1 and "S_3: c is 1, expected 6/5" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "threetrans", "bounds", "run-cases", "--format", "md"], capture_output=True, text=True)
    assert r.returncode == 0 and "Thm6.3-Case6" in r.stdout


def test_bad_subcommand():
    with pytest.raises(SystemExit):
        main(["nope"])
