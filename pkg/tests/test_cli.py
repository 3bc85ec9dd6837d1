import os

import pytest

from storient import bench as bench_mod
from storient.cli import main
from storient.solver import SolveBudget


def run(args):
    return main(args)


def test_gen_and_pipeline(tmp_path, capsys):
    pg = tmp_path / "g.pg"
    assert run(["gen", "--n", "10", "--piv", "0.5", "--seed", "3", "--out", str(pg)]) == 0
    ori = tmp_path / "g.ori"
    assert run(["orient-heur", str(pg), "--out", str(ori)]) == 0
    out = capsys.readouterr().out
    assert "transitive" in out
    assert run(["transitive", str(pg), "--ori", str(ori), "--method", "faces"]) == 0
    svg = tmp_path / "g.svg"
    assert run(
        ["draw", str(pg), "--ori", str(ori), "--out", str(svg), "--highlight-transitive"]
    ) == 0
    assert svg.read_text().startswith("<?xml")
    lab = tmp_path / "g.lab"
    assert run(["label", str(pg), "--ori", str(ori), "--out", str(lab)]) == 0
    assert lab.read_text().strip()


def test_orient_opt_triangle(tmp_path, capsys):
    pg = tmp_path / "t.pg"
    pg.write_text("3 3\n0: 1 2\n1: 2 0\n2: 0 1\nst: 0 2\n")
    code = run(["orient-opt", str(pg)])
    out = capsys.readouterr().out
    assert code == 0
    assert "objective 1" in out


def test_orient_opt_budget_exit(tmp_path, capsys):
    pg = tmp_path / "g.pg"
    run(["gen", "--n", "60", "--piv", "0.5", "--seed", "1", "--out", str(pg)])
    capsys.readouterr()
    code = run(["orient-opt", str(pg), "--node-limit", "1"])
    out = capsys.readouterr().out
    assert code == 3
    assert "incumbent" in out


def test_export_lp(tmp_path):
    pg = tmp_path / "t.pg"
    pg.write_text("3 3\n0: 1 2\n1: 2 0\n2: 0 1\nst: 0 2\n")
    lp = tmp_path / "t.lp"
    assert run(["export-lp", str(pg), "--out", str(lp)]) == 0
    text = lp.read_text()
    assert text.startswith("Minimize")
    assert "z_e0" in text


def test_reduce_one_clause(tmp_path, capsys):
    cnf = tmp_path / "one.cnf"
    cnf.write_text("p nae3sat 3 1\n1 2 3 0\n")
    out_pg = tmp_path / "one.pg"
    assert run(["reduce", "--in", str(cnf), "--out", str(out_pg)]) == 0
    text = out_pg.read_text()
    assert "nonplanar" in text.splitlines()[0]
    assert "1 clauses" in capsys.readouterr().out


def test_bad_input_exit_code(tmp_path):
    bad = tmp_path / "bad.pg"
    bad.write_text("garbage\n")
    assert run(["orient-heur", str(bad)]) == 2
    assert run(["orient-heur", str(tmp_path / "missing.pg")]) == 2


def test_usage_exit_code(capsys):
    assert run(["no-such-command"]) == 1
    capsys.readouterr()


def test_bench_single_cell(tmp_path, capsys):
    csv_path = tmp_path / "bench.csv"
    code = run(
        [
            "bench",
            "--out",
            str(csv_path),
            "--n-list",
            "10",
            "--piv-list",
            "0.5",
            "--seeds",
            "1",
            "--time-limit-s",
            "20",
        ]
    )
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == f"# {bench_mod.CSV_SCHEMA}"
    assert lines[1].startswith("instance_id,")
    assert len(lines) == 3
    row = lines[2].split(",")
    headers = lines[1].split(",")
    rec = dict(zip(headers, row))
    assert int(rec["tr_opt"]) <= int(rec["tr_heur"])
    assert rec["status"].startswith("ok")


def test_bench_replay_byte_identical(tmp_path):
    args = [
        "bench",
        "--n-list",
        "12",
        "--piv-list",
        "0.5",
        "--seeds",
        "2",
        "--strip-timing",
        "--time-limit-s",
        "30",
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bench_records_failures_without_abort(monkeypatch):
    calls = {}

    def boom(*args, **kwargs):
        raise RuntimeError("synthetic")

    monkeypatch.setattr("storient.bench.generate", boom)
    records = bench_mod.run_benchmark([10], [0.5], 2, SolveBudget(time_limit_s=1))
    assert len(records) == 2
    assert all(r.status == "error:RuntimeError" for r in records)


@pytest.mark.acceptance
def test_bench_quick_under_five_minutes(tmp_path):
    import time

    t0 = time.monotonic()
    out = tmp_path / "quick.csv"
    assert run(["bench", "--quick", "--out", str(out), "--workers", "2"]) == 0
    elapsed = time.monotonic() - t0
    assert elapsed < 300, f"--quick took {elapsed:.0f}s"
    assert len(out.read_text().splitlines()) == 2 + 27
