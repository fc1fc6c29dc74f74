import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcoreset import Graph, GraphError, GraphFormatError, Matching, degree, induced_degree_one_matching
from rcoreset.graph import dump_graph, format_graph, load_graph, parse_graph
from rcoreset.matching import brute_force_max_matching

from conftest import complete, path, random_graph, star


@st.composite
def graphs(draw, max_n=10, bipartite=None, multigraph=False):
    bip = draw(st.booleans()) if bipartite is None else bipartite
    if bip:
        a = draw(st.integers(1, max_n // 2))
        b = draw(st.integers(1, max_n // 2))
        pairs = [(i, a + j) for i in range(a) for j in range(b)]
        n, n_left = a + b, a
    else:
        n = draw(st.integers(1, max_n))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        n_left = None
    if not pairs:
        return Graph(n, [], n_left=n_left, multigraph=multigraph)
    if multigraph:
        chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * len(pairs)))
    else:
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True))
    chosen = [(v, u) if draw(st.booleans()) else (u, v) for u, v in chosen]
    return Graph(n, chosen, n_left=n_left, multigraph=multigraph)


class TestLoad:
    def test_plain_file(self, tmp_path):
        f = tmp_path / "g.txt"
        f.write_text("4 2\n0 1\n2 3")
        g = load_graph(f)
        assert g.num_vertices == 4
        assert g.edge_list() == [(0, 1), (2, 3)]
        assert not g.is_bipartite

    def test_self_loop_reports_line(self):
        with pytest.raises(GraphFormatError) as info:
            parse_graph("2 1\n0 0")
        assert info.value.lineno == 2
        assert "self-loop" in str(info.value)

    def test_edge_inside_one_side(self):
        with pytest.raises(GraphFormatError, match="one side") as info:
            parse_graph("4 1 bip 2 2\n0 1")
        assert info.value.lineno == 2

    def test_comments_and_blank_lines_skipped(self):
        g = parse_graph("# hello\n\n3 2\n# mid\n0 1\n1 2\n")
        assert g.edge_list() == [(0, 1), (1, 2)]

    @pytest.mark.parametrize(
        "text, lineno",
        [
            ("", None),
            ("x 1\n", 1),
            ("3 2\n0 1\n", 1),
            ("3 1\n0 1 2\n", 2),
            ("3 1\n0 a\n", 2),
            ("3 1\n0 3\n", 2),
            ("3 2\n0 1\n1 0\n", 3),
            ("4 0 bip 1 2\n", 1),
            ("4 0 weird\n", 1),
        ],
    )
    def test_malformed(self, text, lineno):
        with pytest.raises(GraphFormatError) as info:
            parse_graph(text)
        assert info.value.lineno == lineno

    def test_multigraph_header_allows_parallel(self):
        g = parse_graph("2 2 multi\n0 1\n1 0\n")
        assert g.multigraph and g.num_edges == 2

    def test_constructor_reports_edge_index(self):
        with pytest.raises(GraphError) as info:
            Graph(3, [(0, 1), (1, 2), (2, 1)])
        assert info.value.edge_index == 2


class TestDegree:
    def test_triangle(self):
        tri = complete(3)
        assert [degree(tri, v) for v in range(3)] == [2, 2, 2]

    def test_isolated(self):
        assert degree(Graph(3, [(0, 1)]), 2) == 0

    def test_multiplicity(self):
        g = Graph(2, [(0, 1), (0, 1)], multigraph=True)
        assert degree(g, 0) == 2

    def test_bad_vertex(self):
        with pytest.raises(GraphError):
            degree(path(3), 3)


class TestInducedDegreeOne:
    def test_two_disjoint_edges(self):
        assert induced_degree_one_matching(Graph(4, [(0, 1), (2, 3)])).as_set() == {(0, 1), (2, 3)}

    def test_path(self):
        assert len(induced_degree_one_matching(path(3))) == 0

    def test_triangle_plus_edge(self):
        g = Graph(5, [(0, 1), (1, 2), (0, 2), (3, 4)])
        assert induced_degree_one_matching(g).as_set() == {(3, 4)}

    def test_contained_in_every_maximum_matching(self, rng):
        # forcing those edges out must cost matching size
        for _ in range(200):
            g = random_graph(rng, max_n=10)
            forced = induced_degree_one_matching(g)
            best = brute_force_max_matching(g)
            for e in forced:
                rest = [f for f in g.edge_list() if f != e]
                assert brute_force_max_matching(Graph(g.num_vertices, rest)) == best - 1


class TestMatchingType:
    def test_shared_vertex_rejected(self):
        with pytest.raises(GraphError):
            Matching(((0, 1), (1, 2)), 3)

    def test_normalised_and_ordered(self):
        m = Matching(((3, 2), (1, 0)), 4)
        assert m.edges == ((2, 3), (0, 1))
        assert (3, 2) in m

    def test_validity_against_graph(self):
        g = path(4)
        assert Matching.on(g, [(0, 1), (2, 3)]).is_valid_for(g)
        assert not Matching.on(g, [(0, 3)]).is_valid_for(g)


@settings(max_examples=150, deadline=None)
@given(graphs(multigraph=False))
def test_round_trip_is_bit_exact(g):
    text = format_graph(g)
    back = parse_graph(text)
    assert back == g
    assert format_graph(back) == text


@settings(max_examples=60, deadline=None)
@given(graphs(multigraph=True))
def test_multigraph_round_trip(g):
    assert parse_graph(format_graph(g)) == g


@settings(max_examples=150, deadline=None)
@given(graphs(multigraph=True))
def test_degree_sum(g):
    assert sum(degree(g, v) for v in range(g.num_vertices)) == 2 * g.num_edges


def test_dump_and_load(tmp_path):
    g = Graph(6, [(0, 3), (1, 4), (2, 5), (0, 5)], n_left=3)
    f = tmp_path / "g.txt"
    dump_graph(g, f, comments=["note"])
    assert f.read_text().startswith("# note\n6 4 bip 3 3\n")
    assert load_graph(f) == g


def test_parse_accepts_stream():
    assert parse_graph(io.StringIO("2 1\n0 1\n")).num_edges == 1


def test_edges_are_read_only():
    g = star(3)
    with pytest.raises(ValueError):
        g.edges[0, 0] = 2
    assert isinstance(g.edges, np.ndarray)
