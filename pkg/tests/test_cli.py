from __future__ import annotations

import json

import pytest

from lzlab.cli import main


def run_cli(capsys, *args: str) -> tuple[int, str, str]:
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_ext_in_filtration_zero(capsys):
    code, out, _ = run_cli(capsys, "ext", "--p", "3", "--s", "0", "--t-max", "0")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "lzlab/1"
    assert [(r["t"], r["ext_dim"]) for r in doc["rows"]] == [(0, 1)]


def test_ext_rank_one(capsys):
    code, out, _ = run_cli(capsys, "ext", "--s", "1", "--t-max", "120")
    rows = json.loads(out)["rows"]
    assert code == 0 and {r["t"] for r in rows if r["ext_dim"]} == {0, 3, 11, 35, 107}


def test_phi_rank_two(capsys):
    code, out, _ = run_cli(capsys, "phi", "--s", "2", "--t-max", "120")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert {r["t"] for r in rows if r["phi_rank"]} == {0, 10, 34, 106}
    row10 = next(r for r in rows if r["t"] == 10)
    assert row10 == {"s": 2, "t": 10, "ext_dim": 1, "ann_dim": 1, "phi_rank": 1, "image": ["bQ2 bQ1"]}


def test_rows_sorted_and_output_deterministic(capsys):
    _, a, _ = run_cli(capsys, "ann", "--s", "2,1", "--t-max", "30")
    _, b, _ = run_cli(capsys, "ann", "--s", "1-2", "--t-max", "30", "--jobs", "2")
    assert a == b
    keys = [(r["s"], r["t"]) for r in json.loads(a)["rows"]]
    assert keys == sorted(keys)


@pytest.mark.parametrize("args", [
    ("ext", "--p", "4"),
    ("ext", "--p", "2"),
    ("ann", "--s", "3", "--t-max", "61"),
    ("ext", "--s", "2", "--t-max", "201"),
    ("ext", "--s", "x"),
    ("verify", "--suite", "nope"),
    ("frobnicate",),
])
def test_usage_errors(capsys, args):
    code, _, err = run_cli(capsys, *args)
    assert code == 1 and "usage" in err


def test_force_lifts_the_cap(capsys):
    code, _, _ = run_cli(capsys, "ext", "--s", "3", "--t-max", "121", "--force", "--format", "csv")
    assert code == 0


def test_text_and_csv_formats(capsys):
    _, text, _ = run_cli(capsys, "phi", "--s", "1", "--t-max", "3", "--format", "text")
    assert text.startswith("# lzlab/1") and "phi_rank=1" in text
    _, csv_out, _ = run_cli(capsys, "conjecture", "--s", "1", "--t-max", "8", "--format", "csv")
    assert csv_out.splitlines()[0] == "s,t,element,in_abar"


def test_verify_exit_status(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "dickson")
    doc = json.loads(out)
    assert code == 0 and all(r["ok"] for r in doc["rows"])


def test_cold_and_warm_cache_documents_match(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LZLAB_CACHE", str(tmp_path))
    _, cold, _ = run_cli(capsys, "phi", "--s", "1-2", "--t-max", "50")
    assert any(tmp_path.iterdir())
    _, warm, _ = run_cli(capsys, "phi", "--s", "1-2", "--t-max", "50")
    assert cold == warm


def test_timing_is_opt_in(capsys):
    _, out, _ = run_cli(capsys, "ext", "--s", "1", "--t-max", "3", "--timing")
    assert "seconds" in json.loads(out)["timing"]
    _, out, _ = run_cli(capsys, "ext", "--s", "1", "--t-max", "3")
    assert "timing" not in json.loads(out)
