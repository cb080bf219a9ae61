import csv
import hashlib
import io
import json
import math
import os
import subprocess
import sys

import pytest

from lilperm import cli

ONES4 = "4\n1111\n1111\n1111\n1111\n"
ZERO_ROW = "3\n110\n000\n011\n"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(l for l in text.splitlines(True) if not l.startswith("#")))))


def test_perm_fixture(tmp_path, capsys):
    f = tmp_path / "ones.txt"
    f.write_text(ONES4)
    code, out, _ = run(capsys, "perm", str(f))
    assert code == 0
    assert "permanent: 24\n" in out
    assert "engine: ryser" in out


def test_perm_zero_row(tmp_path, capsys):
    f = tmp_path / "z.txt"
    f.write_text(ZERO_ROW)
    code, out, _ = run(capsys, "perm", str(f))
    assert code == 0
    assert "permanent: 0\n" in out
    assert "log_permanent: \n" in out


def test_perm_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("2\n10\n1x\n")
    code, _, err = run(capsys, "perm", str(f))
    assert code == 1
    assert "line 3, column 2" in err


def test_perm_random_and_limit(capsys):
    a = run(capsys, "perm", "--random", "10", "0.5", "42")
    b = run(capsys, "perm", "--random", "10", "0.5", "42")
    assert a == b and a[0] == 0
    code, _, err = run(capsys, "perm", "--random", "35", "0.5", "1")
    assert code == 2 and "34" in err


def test_usage_errors(capsys):
    assert run(capsys, "perm")[0] == 1
    with pytest.raises(SystemExit) as info:
        cli.main(["nope"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        cli.main(["lil", "--p", "1.5"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        cli.main(["lil", "--seed", "-3"])
    assert info.value.code == 1


def test_moments_exhaustive(capsys):
    code, out, _ = run(capsys, "moments", "--n", "2", "--m", "2", "--k", "1", "--exhaustive")
    assert code == 0
    (row,) = rows(out)
    assert float(row["log_mean"]) == pytest.approx(math.log(1 / 3), rel=1e-11)
    assert list(row) == cli.MOMENT_COLUMNS


def test_moments_k0_and_budget_rows(capsys):
    code, out, _ = run(capsys, "moments", "--n", "3", "9", "--m", "5", "40", "--k", "0", "--exhaustive")
    table = rows(out)
    assert code == 2
    assert len(table) == 4
    ok = [r for r in table if r["status"] == "ok"]
    assert all(float(r["log_mean"]) == 0 for r in ok)
    assert any(r["status"].startswith("budget") for r in table)


def test_census_rows(capsys):
    code, out, _ = run(capsys, "census", "--n", "3", "--k", "2")
    assert code == 0
    table = rows(out)
    assert [(int(r["a"]), int(r["M_a"])) for r in table] == [(0, 12), (1, 18), (2, 0), (3, 6)]
    assert sum(int(r["M_a"]) for r in table) == 36
    code, out, _ = run(capsys, "census", "--n", "1", "--k", "2")
    assert [(int(r["a"]), int(r["M_a"])) for r in rows(out) if int(r["M_a"])] == [(1, 1)]
    assert run(capsys, "census", "--n", "9", "--k", "2")[0] == 1


def test_census_invariant_exit(monkeypatch, capsys):
    from lilperm.moments import Bound1Report, BoundRow

    def broken(census):
        return Bound1Report(census.n, census.k, (BoundRow(0, 1, 0.0, -1.0, False),))

    monkeypatch.setattr(cli, "verify_bound1", broken)
    assert run(capsys, "census", "--n", "2", "--k", "2")[0] == 3


def test_lil_subseq_and_centering(capsys):
    code, out, _ = run(capsys, "lil", "--subseq", "2", "--n-min", "2", "--n-max", "20", "--seed", "1")
    assert code == 0
    assert out.splitlines()[0] == ",".join(cli.LIL_COLUMNS)
    table = rows(out)
    assert [int(r["n"]) for r in table] == [2, 4, 8, 16]
    for r in table:
        n = int(r["n"])
        assert float(r["centering"]) == pytest.approx(math.log(math.factorial(n) / 2**n), rel=1e-11)


@pytest.mark.slow
def test_lil_subseq_full_range(capsys):
    code, out, _ = run(capsys, "lil", "--subseq", "2", "--n-min", "2", "--n-max", "34", "--seed", "1")
    assert code == 0
    assert [int(r["n"]) for r in rows(out)] == [2, 4, 8, 16, 32]


def test_lil_out_and_svg(tmp_path, capsys):
    a, b, svg = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "t.svg"
    assert run(capsys, "lil", "--n-max", "12", "--out", str(a), "--svg", str(svg))[0] == 0
    assert run(capsys, "lil", "--n-max", "12", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert svg.read_text().startswith("<svg")


def test_clt_summary(capsys):
    _, out, _ = run(capsys, "clt", "--n", "8", "--reps", "1", "--seed", "2")
    assert len(out.splitlines()) == 2 and "#" not in out
    _, out, _ = run(capsys, "clt", "--n", "8", "--reps", "20", "--seed", "2")
    assert out.splitlines()[-1].startswith("# summary:")
    assert len(rows(out)) == 20


def test_expect_and_bounds(capsys):
    code, out, _ = run(capsys, "expect", "--n", "2", "--m", "2", "3")
    assert code == 0
    assert float(rows(out)[0]["log_expected_exact"]) == pytest.approx(math.log(1 / 3))
    code, out, _ = run(capsys, "bounds", "--n", "20", "--k", "2")
    table = rows(out)
    assert code == 0 and len(table) == 21
    assert table[1]["log_bound_refined"] != "" and table[2]["log_bound_refined"] == ""


def test_seed_env_and_hex(monkeypatch, capsys):
    monkeypatch.setenv("LILPERM_SEED", "0x1f")
    _, a, _ = run(capsys, "lil", "--n-max", "6")
    monkeypatch.delenv("LILPERM_SEED")
    _, b, _ = run(capsys, "lil", "--n-max", "6", "--seed", "31")
    assert a == b
    assert rows(a)[0]["seed"] == "31"


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"seed": "0x5", "n_max": 7, "p": 0.3}))
    _, a, _ = run(capsys, "lil", "--config", str(cfg))
    _, b, _ = run(capsys, "lil", "--seed", "5", "--n-max", "7", "--p", "0.3")
    assert a == b
    _, c, _ = run(capsys, "lil", "--config", str(cfg), "--n-max", "5")
    assert [int(r["n"]) for r in rows(c)] == [1, 2, 3, 4, 5]
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(SystemExit) as info:
        cli.main(["lil", "--config", str(cfg)])
    assert info.value.code == 1


def test_manifest(tmp_path, capsys):
    man, out = tmp_path / "m.json", tmp_path / "o.csv"
    assert run(capsys, "census", "--n", "3", "--k", "2", "--out", str(out), "--manifest", str(man))[0] == 0
    data = json.loads(man.read_text())
    assert data["subcommand"] == "census"
    assert data["parameters"] == {"command": "census", "k": 2, "n": 3}
    assert data["output_sha256"] == hashlib.sha256(out.read_bytes()).hexdigest()
    assert data["version"]


def test_fmt():
    assert cli.fmt(None) == ""
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(12) == "12"
    assert cli.fmt(-math.inf) == "-inf"


def test_console_entry_point(tmp_path):
    f = tmp_path / "ones.txt"
    f.write_text(ONES4)
    env = dict(os.environ)
    res = subprocess.run([sys.executable, "-m", "lilperm.cli", "perm", str(f)], capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert "permanent: 24" in res.stdout
