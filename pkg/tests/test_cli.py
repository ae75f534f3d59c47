import json
from pathlib import Path

import pytest

from spx.cli import main


def _gen(tmp_path, family="lin2", n=10, m=20, seed=1, k=3):
    path = tmp_path / "inst.spx"
    rc = main(["gen", "--family", family, "--n", str(n), "--k", str(k),
               "--m", str(m), "--seed", str(seed), "--out", str(path)])
    assert rc == 0
    return path


def test_gen_and_oracle(tmp_path, capsys):
    path = _gen(tmp_path)
    assert main(["oracle", "--in", str(path), "--eta", "1/2"]) == 0
    out = capsys.readouterr().out
    assert "h_min = " in out and "|T_eta|" in out


def test_gen_stdout(capsys):
    assert main(["gen", "--family", "lin2", "--n", "6", "--m", "5",
                 "--seed", "0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("p lin2 6 3 5")


def test_solve_case1_cli(tmp_path, capsys):
    path = _gen(tmp_path, seed=3)
    rc = main(["solve", "--in", str(path), "--mode", "case1", "--seed", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "certified = True" in out


def test_solve_sweep_cli(tmp_path, capsys):
    path = _gen(tmp_path, family="csp", seed=4)
    rc = main(["solve", "--in", str(path), "--mode", "sweep"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "value = " in out


def test_exponents_calculator(capsys):
    rc = main(["exponents", "--k", "3", "--eta", "1/2", "--gamma", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "c_cl = 0.4789" in out
    assert "ratio = " in out


def test_exponents_instance(tmp_path, capsys):
    path = _gen(tmp_path, family="csp", n=12, m=24, seed=0)
    rc = main(["exponents", "--in", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "regime = local-lipschitz" in out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--mode", "nope"])
    assert exc.value.code == 1


def test_missing_file_is_usage_error(capsys):
    assert main(["oracle", "--in", "/nonexistent.spx"]) == 1


def test_bench_writes_report(tmp_path, capsys):
    out_dir = tmp_path / "rep"
    rc = main(["bench", "--n", "8", "10", "--seeds", "2",
               "--out", str(out_dir), "--no-figures"])
    assert rc == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["schema"] == "spx-report/1"
    assert report["config"]["eta"] == "1/2"
    csv_text = (out_dir / "report.csv").read_text()
    assert csv_text.splitlines()[0].startswith("family,n,k,m,seed")


def test_bench_reports_replay_identically(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        assert main(["bench", "--n", "8", "--seeds", "2", "--out", str(d),
                     "--no-figures"]) == 0
    j1 = json.loads((d1 / "report.json").read_text())
    j2 = json.loads((d2 / "report.json").read_text())
    j1.pop("timestamp"), j2.pop("timestamp")
    # configs differ only in the output path itself
    j1["config"].pop("out_dir"), j2["config"].pop("out_dir")
    assert j1 == j2
    assert (d1 / "report.csv").read_bytes() == (d2 / "report.csv").read_bytes()


def test_bench_empty_range(tmp_path):
    out_dir = tmp_path / "empty"
    rc = main(["bench", "--n", "8", "--seeds", "0", "--out", str(out_dir),
               "--no-figures"])
    assert rc == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["rows"] == []


def test_bench_figures(tmp_path):
    out_dir = tmp_path / "figs"
    assert main(["bench", "--n", "8", "--seeds", "2",
                 "--out", str(out_dir)]) == 0
    assert (out_dir / "scaling.png").exists()
    assert (out_dir / "draws.png").exists()
