import csv
import json

import pytest

from strandcolor import stream as S
from strandcolor.cli import main


@pytest.fixture
def star(tmp_path):
    path = tmp_path / "star.txt"
    assert main(["gen", "--kind", "star", "--n", "6", "-o", str(path)]) == 0
    return path


@pytest.fixture(autouse=True)
def no_env_seed(monkeypatch):
    monkeypatch.delenv("STRANDCOLOR_SEED", raising=False)


@pytest.mark.parametrize("argv", [
    ["gen", "--kind", "multigraph", "--n", "12", "--delta", "3", "--repeat-bias", "0.4"],
    ["gen", "--kind", "regular-bipartite", "--na", "4", "--nb", "6", "--delta", "3", "--simple"],
    ["gen", "--kind", "bipartite-edge", "--na", "4", "--nb", "6", "--delta", "3", "--mode", "osva"],
    ["gen", "--kind", "path", "--n", "5", "--mode", "va"],
    ["gen", "--kind", "adversarial", "--delta", "3"],
])
def test_gen_writes_valid_streams(tmp_path, argv):
    out = tmp_path / "s.txt"
    assert main(argv + ["-o", str(out)]) == 0
    S.validate_stream(S.parse_stream(out.read_text()))


def test_gen_writes_to_stdout(capsys):
    assert main(["gen", "--kind", "path", "--n", "3"]) == 0
    assert capsys.readouterr().out.startswith("h n=3 delta=2 mode=ea")


@pytest.mark.parametrize("argv", [
    ["gen", "--kind", "multigraph", "--n", "5"],
    ["gen", "--kind", "nope"],
    ["run", "--algo", "nope", "--stream", "x"],
    ["run", "--algo", "greedy", "--stream", "/does/not/exist"],
    ["bench", "--algo", "greedy", "--stream", "x", "--seeds", "1,a"],
    [],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2


def test_bad_set_and_bad_env(star, monkeypatch):
    assert main(["run", "--algo", "greedy", "--stream", str(star), "--set", "novalue"]) == 2
    monkeypatch.setenv("STRANDCOLOR_SEED", "x")
    assert main(["run", "--algo", "greedy", "--stream", str(star)]) == 2


def test_run_then_verify(star, tmp_path):
    tr, js = tmp_path / "t.txt", tmp_path / "r.json"
    assert main(["run", "--algo", "rand-ea", "--stream", str(star), "--seed", "3", "-o", str(tr),
                 "--json", str(js)]) == 0
    summary = json.loads(js.read_text())
    assert summary["schema"] == 1 and summary["edges"] == 5 and summary["aborts"] == 0
    assert set(summary) == {"schema", "algo", "profile", "seed", "n", "delta", "edges", "palette",
                            "state_bits_peak", "aborts", "error", "regime", "wall_ms"}
    vj = tmp_path / "v.json"
    assert main(["verify", "--stream", str(star), "--transcript", str(tr), "--json", str(vj)]) == 0
    assert json.loads(vj.read_text())["violations"] == 0


def test_verify_flags_a_tampered_transcript(star, tmp_path, capsys):
    tr = tmp_path / "t.txt"
    main(["run", "--algo", "greedy", "--stream", str(star), "-o", str(tr)])
    lines = tr.read_text().splitlines()
    lines[2] = lines[2].rsplit(" ", 1)[0] + " 1"
    tr.write_text("\n".join(lines) + "\n")
    assert main(["verify", "--stream", str(star), "--transcript", str(tr)]) == 1
    assert "SharedColorAtVertex vertex=1" in capsys.readouterr().out


def test_verify_reconverts_for_vertex_arrival_colorers(tmp_path):
    s = tmp_path / "b.txt"
    main(["gen", "--kind", "bipartite-edge", "--na", "6", "--nb", "6", "--delta", "4", "-o", str(s)])
    tr = tmp_path / "t.txt"
    assert main(["run", "--algo", "bpt-det-va", "--stream", str(s), "-o", str(tr)]) == 0
    assert "mode=osva" in tr.read_text().splitlines()[0]
    assert main(["verify", "--stream", str(s), "--transcript", str(tr)]) == 0


def test_run_is_deterministic_and_env_seed_wins(star, tmp_path, monkeypatch):
    a, b, c = (tmp_path / f"{k}.txt" for k in "abc")
    main(["run", "--algo", "conj-ea", "--stream", str(star), "--seed", "9", "-o", str(a)])
    main(["run", "--algo", "conj-ea", "--stream", str(star), "--seed", "9", "-o", str(b)])
    assert a.read_text() == b.read_text()
    monkeypatch.setenv("STRANDCOLOR_SEED", "9")
    main(["run", "--algo", "conj-ea", "--stream", str(star), "--seed", "1", "-o", str(c)])
    assert c.read_text() == a.read_text()


def test_run_abort_exits_one(star, tmp_path, capsys):
    js = tmp_path / "r.json"
    code = main(["run", "--algo", "conj-ea", "--stream", str(star), "--set", "pool_cap=0", "-o",
                 str(tmp_path / "t.txt"), "--json", str(js)])
    assert code == 1
    assert json.loads(js.read_text())["error"] == "PoolMemoryCap"
    assert "PoolMemoryCap" in capsys.readouterr().err


def test_bench_csv(star, tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--algo", "greedy", "--algo", "conj-ea", "--stream", str(star), "--seeds", "1,2",
                 "-o", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["algo"] for r in rows] == ["conj-ea", "greedy"]
    assert rows[1]["colors_max"] == "5" and rows[1]["abort_rate"] == "0.000000"
    assert rows[0]["seeds"] == "2"


def test_bench_with_no_seeds_is_header_only(star, tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--algo", "greedy", "--stream", str(star), "--seeds", "", "-o", str(out)]) == 0
    assert out.read_text() == ("schema,algo,stream,n,delta,seeds,colors_max,palette_bound,"
                               "state_bits_max,abort_rate\n")
