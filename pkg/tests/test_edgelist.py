import pytest

from cyclefactor.edgelist import EdgeListError, format_edgelist, graph_hash, parse_edgelist, read_edgelist, write_edgelist
from cyclefactor.graph import random_oriented


def test_round_trip(tmp_path):
    g = random_oriented(30, 0.4, 2)
    path = tmp_path / "g.txt"
    write_edgelist(g, path)
    assert read_edgelist(path) == g
    assert path.read_bytes().decode("ascii") == format_edgelist(g)


def test_format_header():
    text = format_edgelist(parse_edgelist("3 2\n0 1\n1 2\n"))
    assert text == "3 2\n0 1\n1 2\n"


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("3 2\n0 1\n1 1\n", 3),
        ("3 2\n0 1\n0 1\n", 3),
        ("3 3\n0 1\n1 2\n1 0\n", 4),
        ("3 1\n0 7\n", 2),
        ("3 1\n0 x\n", 2),
        ("3\n", 1),
        ("3 2\n0 1\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(EdgeListError) as info:
        parse_edgelist(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_graph_hash_stable():
    assert graph_hash(random_oriented(20, 0.5, 1)) == graph_hash(random_oriented(20, 0.5, 1))
    assert graph_hash(random_oriented(20, 0.5, 1)) != graph_hash(random_oriented(20, 0.5, 2))
