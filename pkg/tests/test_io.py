import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpkit import Graph, InputCleanupWarning, ParseError, format_edge_list, parse_edge_list, read_edge_list
from cpkit import write_edge_list


def test_parse_whitespace_comma_and_comments():
    g = parse_edge_list(["# header", "a b", "b,c", "  c   a  ", "", "# trailing"])
    assert g.n == 3 and g.m == 3
    assert list(g.node_names) == ["a", "b", "c"]


def test_first_seen_order_densifies_labels():
    g = parse_edge_list(["10 3", "3 7"])
    assert list(g.node_names) == ["10", "3", "7"]
    assert g.edges().tolist() == [[0, 1], [1, 2]]


def test_single_token_declares_node():
    g = parse_edge_list(["x", "a b"])
    assert g.n == 3 and g.m == 1 and g.degrees.tolist() == [0, 1, 1]


def test_three_tokens_is_parse_error_with_line():
    with pytest.raises(ParseError) as exc:
        parse_edge_list(["a b", "# c", "a b c"], path="f.txt")
    assert exc.value.line == 3
    assert "f.txt" in str(exc.value) and "3" in str(exc.value)


def test_empty_input_is_parse_error(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("")
    with pytest.raises(ParseError):
        read_edge_list(p)
    with pytest.raises(ParseError):
        parse_edge_list(["# only comments"])


def test_duplicates_and_loops_warn_with_path():
    with pytest.warns(InputCleanupWarning, match="in.txt"):
        g = parse_edge_list(["a b", "b a", "a a"], path="in.txt")
    assert g.m == 1


@st.composite
def named_graphs(draw):
    n = draw(st.integers(1, 9))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    names = draw(st.lists(st.from_regex(r"[A-Za-z0-9_.-]{1,6}", fullmatch=True), min_size=n, max_size=n, unique=True))
    edges = [p for p, keep in zip(pairs, mask) if keep]
    return Graph.from_edges(edges, n=n, node_names=names)


@given(named_graphs())
def test_round_trip_preserves_graph_and_names(g):
    h = parse_edge_list(format_edge_list(g).splitlines())
    assert h.fingerprint() == g.fingerprint()
    assert list(h.node_names) == list(g.node_names)


def test_round_trip_through_file(tmp_path):
    g = Graph.from_edges([(2, 0), (0, 1)], n=4, node_names=["p", "q", "r", "s"])
    path = tmp_path / "g.txt"
    write_edge_list(g, path)
    h = read_edge_list(path)
    assert h == g and list(h.node_names) == ["p", "q", "r", "s"]


def test_parse_accepts_a_whole_string():
    g = parse_edge_list("# header\n0 1\n2\n")
    assert g.node_names == ("0", "1", "2") and g.m == 1
