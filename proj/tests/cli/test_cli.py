"""Integration tests for the command line tool.

Run with the COARSEDIM_BIN environment variable pointing at the binary;
the ctest registration sets it automatically.
"""

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

BIN = os.environ.get("COARSEDIM_BIN", "coarsedim")


def run(*args, expect=0):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    assert proc.returncode == expect, (
        f"{args}: exit {proc.returncode}, stderr: {proc.stderr}"
    )
    return proc


def test_space_gen_and_roundtrip(tmp_path: Path):
    out = tmp_path / "p6.json"
    run("space", "gen", "path", "--n", "6", "-o", str(out))
    doc = json.loads(out.read_text())
    assert doc["points"] == [str(i) for i in range(6)]
    assert doc["dist"][0][5] == 5

    # re-emitting a consumed file produces identical content
    w = tmp_path / "w.json"
    run("ad", "--def", "families", "--R", "1", "--D", "2",
        "--witness", str(w), str(out))
    witness = json.loads(w.read_text())
    assert witness["families"] == [[[0, 1, 2]], [[3, 4, 5]]]


def test_usage_and_cap_exit_codes(tmp_path: Path):
    run("space", "gen", "path", "--n", "0", expect=2)
    run("space", "gen", "grid", "--dims", "100x100", expect=3)

    big = tmp_path / "p20.json"
    run("space", "gen", "path", "--n", "20", "-o", str(big))
    run("ad", "--def", "families", "--R", "1", "--D", "2", str(big), expect=4)

    run("nonsense", expect=2)


def test_ad_values_and_ranges(tmp_path: Path):
    p6 = tmp_path / "p6.json"
    run("space", "gen", "path", "--n", "6", "-o", str(p6))
    proc = run("ad", "--def", "families", "--R", "1", "--D", "2", str(p6))
    assert proc.stdout.strip() == "1"

    proc = run("ad", "--def", "families", "--R", "10", "--D", "2",
               "--m-max", "0", str(p6))
    assert proc.stdout.strip() == "inf"

    csv = tmp_path / "curve.csv"
    run("ad", "--def", "families", "--R", "1..3", "--D", "3", "-o", str(csv),
        str(p6))
    lines = csv.read_text().strip().splitlines()
    assert lines[0] == "R,value"
    assert len(lines) == 4


def test_dad_crosschecks(tmp_path: Path):
    p6 = tmp_path / "p6.json"
    run("space", "gen", "path", "--n", "6", "-o", str(p6))
    proc = run("dad", "crosscheck416", "--R", "1", "--D", "2", str(p6))
    assert proc.stdout.startswith("1 = 1 = 1")

    proc = run("dad", "crosscheck412", "--action", "rotation:12", "--R", "2",
               "--B", "3")
    assert proc.stdout.startswith("1 = 1")


def test_groupoid_pipeline_and_check(tmp_path: Path):
    z12 = tmp_path / "z12.json"
    run("groupoid", "gen", "action", "--action", "rotation:12", "-o", str(z12))

    proc = run("dad", "solve", "--R", "2", "--B", "3", str(z12))
    assert proc.stdout.strip() == "1"

    w = tmp_path / "witness.json"
    run("amen", "pipeline", "--R", "2", "--eps", "0.5", "--alpha", "0.5",
        str(z12), "-o", str(w))
    doc = json.loads(w.read_text())
    assert doc["report"]["pass"] is True

    run("amen", "check", "--R", "2", "--eps", "0.5", str(z12), str(w))

    pou = tmp_path / "pou.json"
    run("pou", "run", "--R", "2", "--eps", "0.5", "--alpha", "0.5", str(z12),
        "-o", str(pou))
    assert json.loads(pou.read_text())["p"] == 2


def test_growth_commands(tmp_path: Path):
    f = tmp_path / "f.csv"
    g = tmp_path / "g.csv"
    f.write_text("R,value\n" + "".join(f"{x},{x}\n" for x in range(1, 101)))
    g.write_text("R,value\n" + "".join(f"{x},{x * x}\n" for x in range(1, 101)))
    proc = run("growth", "compare", "--kmax", "5", str(f), str(g))
    assert "f<=g: k=1" in proc.stdout

    proc = run("growth", "classify", str(g))
    assert proc.stdout.startswith("polynomial")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))


def test_verification_failure_exit_code(tmp_path: Path):
    z6 = tmp_path / "z6.json"
    run("groupoid", "gen", "action", "--action", "rotation:6", "-o", str(z6))
    n_arrows = 36
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mu": [[0, 0.0]], "provenance": "user"}))
    run("amen", "check", "--R", "2", "--eps", "0.5", str(z6), str(bad),
        expect=5)
    assert n_arrows == 36


def test_seeded_random_space(tmp_path: Path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run("space", "gen", "random", "--n", "9", "--seed", "7", "-o", str(a))
    run("space", "gen", "random", "--n", "9", "--seed", "7", "-o", str(b))
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert da == db  # same seed, same space
    assert da["meta"]["seed"] == 7
