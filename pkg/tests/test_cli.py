import json

import pytest

from cyclefactor import cli
from cyclefactor.edgelist import read_edgelist
from cyclefactor.hamilton import OrientationPattern, same_cycle


def run(args):
    code = cli.main([str(a) for a in args])
    return code


def load(path):
    return json.loads(path.read_text())


def test_gen_tournament(tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert run(["gen", "tournament", 16, "--seed", 1, "--out", out]) == 0
    g = read_edgelist(out)
    assert g.n == 16 and g.num_edges == 120
    summary = json.loads(capsys.readouterr().out)
    assert summary["e"] == 120


def test_gen_oriented_empty(tmp_path):
    out = tmp_path / "o.txt"
    assert run(["gen", "oriented", 100, 0.0, "--seed", 2, "--out", out]) == 0
    assert out.read_text().splitlines()[0] == "100 0"


def test_gen_reproducible(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(["gen", "oriented", 50, 0.4, "--seed", 3, "--out", a])
    run(["gen", "oriented", 50, 0.4, "--seed", 3, "--out", b])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("args", [["gen", "tournament"], ["gen", "oriented", 10], ["gen", "cube", 3],
                                  ["gen", "oriented", 10, 2.0]])
def test_gen_usage_errors(args):
    with pytest.raises(SystemExit) as info:
        run(args)
    assert info.value.code == cli.EXIT_USAGE


def test_degree_from_file(tmp_path):
    src = tmp_path / "g.txt"
    src.write_text("3 3\n0 1\n1 2\n2 0\n")
    out = tmp_path / "d.json"
    assert run(["degree", "--input", src, "--out", out]) == 0
    res = load(out)["result"]
    assert (res["semi_degree"], res["total_degree"]) == (1, 2)


def test_bad_input_file(tmp_path, capsys):
    src = tmp_path / "g.txt"
    src.write_text("3 2\n0 1\n1 0\n")
    assert run(["degree", "--input", src]) == cli.EXIT_INPUT
    assert "line 3" in capsys.readouterr().err


def test_partition(tmp_path):
    out = tmp_path / "p.json"
    assert run(["partition", "--tournament", 512, "--ell", 64, "--seed", 5, "--out", out]) == 0
    doc = load(out)
    assert list(doc) == ["meta", "config", "result"]
    part = doc["result"]["partition"]
    assert len(part["blocks"]) == 8 and part["seed"] == 5
    assert doc["result"]["verified"]


def test_partition_divisibility(tmp_path):
    out = tmp_path / "p.json"
    assert run(["partition", "--tournament", 512, "--ell", 60, "--out", out]) == cli.EXIT_DIVISIBILITY
    assert load(out)["result"]["status"] == "divisibility"


def test_partition_exhaustion_and_best_effort(tmp_path, monkeypatch):
    from cyclefactor.partition import SplitThreshold

    monkeypatch.setattr(SplitThreshold, "for_graph", classmethod(lambda cls, d, n: cls(d, n, 1.0)))
    out = tmp_path / "p.json"
    base = ["partition", "--tournament", 64, "--ell", 16, "--max-attempts", 2, "--out", out]
    assert run(base) == cli.EXIT_ATTEMPTS
    assert run(base + ["--best-effort"]) == 0
    assert load(out)["result"]["status"] == "below-threshold"


def test_hamilton(tmp_path):
    src = tmp_path / "t.txt"
    src.write_text("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    out = tmp_path / "h.json"
    assert run(["hamilton", "--input", src, "--out", out]) == cli.EXIT_NOT_FOUND
    assert run(["hamilton", "--input", src, "--pattern", "++--", "--out", out]) == 0
    assert load(out)["result"]["verified"]
    assert run(["hamilton", "--input", src, "--pattern", "++--", "--method", "backtrack",
                "--budget", 0, "--out", out]) == cli.EXIT_BUDGET


def test_factor_mixed(tmp_path):
    out = tmp_path / "f.json"
    pats = "++++++++,+++-++-+,++++++--"
    assert run(["factor", "--tournament", 24, "--ell", 8, "--patterns", pats, "--seed", 1, "--out", out]) == 0
    res = load(out)["result"]
    assert res["verified"]
    got = [OrientationPattern.from_string(p["pattern"]) for p in res["certificate"]["parts"]]
    wanted = [OrientationPattern.from_string(p) for p in pats.split(",")]
    assert all(same_cycle(a, b) for a, b in zip(got, wanted))
    assert len({str(p) for p in got}) == 3
    assert res["threshold_report"]["ell0_cube_term"] == pytest.approx(8e6)


def test_factor_single_part(tmp_path):
    out = tmp_path / "f.json"
    assert run(["factor", "--tournament", 10, "--ell", 10, "--patterns", "++-++-++-+", "--seed", 2,
                "--out", out]) == 0
    assert len(load(out)["result"]["certificate"]["parts"]) == 1


def test_factor_pattern_length():
    with pytest.raises(SystemExit) as info:
        run(["factor", "--tournament", 24, "--ell", 8, "--patterns", "+++"])
    assert info.value.code == cli.EXIT_USAGE


def test_factor_not_found(tmp_path):
    src = tmp_path / "t.txt"
    src.write_text("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    out = tmp_path / "f.json"
    assert run(["factor", "--input", src, "--ell", 4, "--out", out]) == cli.EXIT_NOT_FOUND
    assert load(out)["result"]["status"] == "not-found"


def test_experiment_tail(tmp_path):
    out, table = tmp_path / "e.json", tmp_path / "e.csv"
    assert run(["experiment", "tail", "--N", 100, "--n", 50, "--m", 50, "--t", 10, "--samples", 100000,
                "--out", out, "--csv", table]) == 0
    assert load(out)["result"]["pass"]
    assert table.read_text().startswith("N,n,m,t")


def test_experiment_split_success(tmp_path):
    out = tmp_path / "s.json"
    assert run(["experiment", "split-success", "--n", 1024, "--trials", 200, "--out", out]) == 0
    assert load(out)["result"]["empirical"] >= 0.5


@pytest.mark.parametrize("args", [
    ["experiment", "tail", "--N", 100, "--n", 50, "--m", 50, "--t", 10, "--samples", 0],
    ["experiment", "tail", "--N", 100, "--n", 50],
    ["experiment", "split-success", "--n", 7],
])
def test_experiment_usage(args):
    with pytest.raises(SystemExit) as info:
        run(args)
    assert info.value.code == cli.EXIT_USAGE


def test_exit_codes_disjoint():
    codes = [cli.EXIT_OK, cli.EXIT_USAGE, cli.EXIT_INPUT, cli.EXIT_DIVISIBILITY, cli.EXIT_ATTEMPTS,
             cli.EXIT_NOT_FOUND, cli.EXIT_BUDGET, cli.EXIT_VERIFY, cli.EXIT_EXPERIMENT]
    assert len(set(codes)) == len(codes)
