from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qci.cli import EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, main
from qci.modrep import simple_module

from conftest import algebra

EXTERIOR = json.dumps({"c": 2, "a": 2, "p": 5})
A3 = json.dumps({"c": 2, "a": 3, "p": 7})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_info_json(capsys):
    code, out, _ = run(capsys, "algebra-info", "--config", A3, "--format", "json")
    assert code == EXIT_OK
    info = json.loads(out)
    assert info["dim"] == 9 and info["nakayama_order"] == 3 and info["frobenius_nondegenerate"]


def test_algebra_info_text_and_file_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"algebra": {"c": 3, "a": 2, "p": 5}}))
    code, out, _ = run(capsys, "algebra-info", "--config", str(cfg))
    assert code == EXIT_OK and "dim A            8" in out


def test_config_errors(capsys):
    code, _, err = run(capsys, "algebra-info", "--config", '{"c": 2, "a": 2, "p": 6}')
    assert code == EXIT_CONFIG and "NotPrime" in err
    code, _, err = run(capsys, "algebra-info", "--config", "{not json")
    assert code == EXIT_CONFIG
    code, _, err = run(capsys, "algebra-info", "--config", "/nonexistent/cfg.json")
    assert code == EXIT_CONFIG


def test_explore_requires_seed(capsys):
    code, _, err = run(capsys, "explore", "--config", EXTERIOR)
    assert code == EXIT_CONFIG and "seed" in err


def test_explore_writes_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "explore", "--config", EXTERIOR, "--seed", "1", "--radius", "2",
                       "--out", str(tmp_path))
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["verdict"] == "TildeA12Pattern" and summary["vertices"] == 9
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fragment-k-r2-s1.dot", "fragment-k-r2-s1.json"]
    frag = json.loads((tmp_path / "fragment-k-r2-s1.json").read_text())
    assert frag["evidence"]["verdict"] == "TildeA12Pattern"


def test_explore_budget(capsys):
    code, _, err = run(capsys, "explore", "--config", EXTERIOR, "--seed", "1", "--radius", "4",
                       "--max-vertices", "3")
    assert code == EXIT_BUDGET and "budget" in err


def test_explore_from_module_file(capsys, tmp_path):
    path = tmp_path / "k.json"
    path.write_text(simple_module(algebra(2, 3, 7)).to_json())
    code, out, _ = run(capsys, "explore", "--config", A3, "--seed", "0", "--radius", "1",
                       "--start", "file", "--module", str(path), "--format", "json")
    assert code == EXIT_OK and json.loads(out)["start"] == "file"


def test_rank_variety(capsys):
    code, out, _ = run(capsys, "rank-variety", "--config", EXTERIOR, "--seed", "0", "--point", "1,2")
    assert code == EXIT_OK
    assert json.loads(out)["members"] == [[1, 2]]


def test_verify_quick_is_byte_stable(capsys, tmp_path):
    outs = []
    for d in ("a", "b"):
        code, out, _ = run(capsys, "verify", "--config", EXTERIOR, "--seed", "3", "--suite", "quick",
                           "--out", str(tmp_path / d))
        assert code == EXIT_OK
        outs.append((tmp_path / d / "verify-quick-s3.json").read_bytes())
    assert outs[0] == outs[1]
    report = json.loads(outs[0])
    assert {c["id"] for c in report["checks"]} == {f"C{i:02d}" for i in range(1, 15)}


def test_verify_exit_code_on_failure(capsys):
    """a = 3 fails the literal principal-module dimension check, which surfaces as exit 4."""
    code, out, _ = run(capsys, "verify", "--config", A3, "--seed", "0", "--suite", "quick")
    assert code == EXIT_VERIFY
    failed = [c["id"] for c in json.loads(out)["checks"] if c["status"] == "fail"]
    assert failed == ["C03"]


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "qci.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("qci ")


def test_verify_suite_alias(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--config", EXTERIOR, "--seed", "0", "--suite", "paper",
                       "--out", str(tmp_path))
    assert code == EXIT_OK and json.loads(out)["suite"] == "full"
    assert (tmp_path / "verify-full-s0.json").exists()
