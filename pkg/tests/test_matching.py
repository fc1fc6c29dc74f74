import itertools
import random

import networkx as nx
import pytest

from rcoreset import (
    Graph,
    GraphError,
    brute_force_max_matching,
    maximal_matching,
    maximum_matching_bipartite,
    maximum_matching_general,
)
from rcoreset.matching import maximum_matching

from conftest import complete, complete_bipartite, cycle, path, petersen, random_bipartite, random_graph, star


def subset_oracle(g):
    """Largest vertex-disjoint edge subset, enumerating every matching."""
    edges = g.edge_list()

    def grow(i, used):
        best = 0
        for j in range(i, len(edges)):
            u, v = edges[j]
            if u not in used and v not in used:
                best = max(best, 1 + grow(j + 1, used | {u, v}))
        return best

    return grow(0, frozenset())


def is_maximal(g, m):
    used = m.vertices()
    return all(u in used or v in used for u, v in g.edge_list())


class TestMaximal:
    def test_path_in_order(self):
        assert maximal_matching(path(4), [0, 1, 2]).as_set() == {(0, 1), (2, 3)}

    def test_path_middle_first(self):
        assert maximal_matching(path(4), [1, 0, 2]).as_set() == {(1, 2)}

    @pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
    def test_triangle_any_order(self, order):
        assert len(maximal_matching(complete(3), list(order))) == 1

    def test_star(self):
        assert len(maximal_matching(star(4))) == 1

    @pytest.mark.parametrize("order", [[0, 1], [0, 0, 1], [0, 1, 3], [-1, 0, 1]])
    def test_order_must_be_permutation(self, order):
        with pytest.raises(ValueError):
            maximal_matching(path(4), order)

    def test_half_of_maximum(self, rng):
        for _ in range(300):
            g = random_graph(rng)
            m = maximal_matching(g)
            assert is_maximal(g, m)
            assert m.is_valid_for(g)
            assert 2 * len(m) >= brute_force_max_matching(g)


class TestBipartite:
    def test_k33(self):
        assert len(maximum_matching_bipartite(complete_bipartite(3, 3))) == 3

    def test_three_edges(self):
        g = Graph(4, [(0, 2), (0, 3), (1, 2)], n_left=2)
        m = maximum_matching_bipartite(g)
        assert m.as_set() == {(0, 3), (1, 2)}
        assert subset_oracle(g) == 2

    def test_empty(self):
        assert len(maximum_matching_bipartite(Graph(4, [], n_left=2))) == 0

    def test_needs_bipartition(self):
        with pytest.raises(GraphError):
            maximum_matching_bipartite(path(3))

    def test_multigraph_parallel_edges_collapse(self):
        g = Graph(4, [(0, 2), (0, 2), (1, 2), (0, 3)], n_left=2, multigraph=True)
        assert len(maximum_matching_bipartite(g)) == 2

    def test_large_against_networkx(self):
        r = random.Random(7)
        for _ in range(5):
            a, b = 400, 350
            edges = {(r.randrange(a), a + r.randrange(b)) for _ in range(1200)}
            g = Graph(a + b, sorted(edges), n_left=a)
            nxg = nx.Graph(list(edges))
            nxg.add_nodes_from(range(a + b))
            expect = len(nx.bipartite.hopcroft_karp_matching(nxg, top_nodes=range(a))) // 2
            m = maximum_matching_bipartite(g)
            assert len(m) == expect and m.is_valid_for(g)


class TestGeneral:
    def test_five_cycle(self):
        assert len(maximum_matching_general(cycle(5))) == 2

    def test_triangle_with_pendants(self):
        g = Graph(9, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6), (4, 7), (5, 8)])
        m = maximum_matching_general(g)
        assert len(m) == brute_force_max_matching(g) == subset_oracle(g)

    def test_triangle_with_single_pendants(self):
        g = Graph(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])
        assert len(maximum_matching_general(g)) == subset_oracle(g) == 3

    def test_petersen(self):
        g = petersen()
        assert len(maximum_matching_general(g)) == 5
        assert brute_force_max_matching(g) == 5

    def test_nested_blossoms_against_networkx(self):
        r = random.Random(3)
        for _ in range(40):
            n = r.randint(20, 60)
            edges = {tuple(sorted(r.sample(range(n), 2))) for _ in range(r.randint(n, 3 * n))}
            g = Graph(n, sorted(edges))
            expect = len(nx.max_weight_matching(nx.Graph(list(edges)), maxcardinality=True))
            m = maximum_matching_general(g)
            assert len(m) == expect and m.is_valid_for(g)

    def test_dispatch(self):
        assert len(maximum_matching(complete_bipartite(2, 3))) == 2
        assert len(maximum_matching(cycle(7))) == 3


class TestBruteForce:
    def test_single_edge(self):
        assert brute_force_max_matching(Graph(2, [(0, 1)])) == 1

    def test_path_five_edges(self):
        assert brute_force_max_matching(path(6)) == 3

    def test_k4(self):
        assert brute_force_max_matching(complete(4)) == 2

    def test_too_large(self):
        with pytest.raises(ValueError):
            brute_force_max_matching(complete(20))

    def test_agrees_with_subset_enumeration(self, rng):
        for _ in range(150):
            g = random_graph(rng, max_n=8)
            assert brute_force_max_matching(g) == subset_oracle(g)


def test_engines_agree_with_brute_force(rng):
    for _ in range(300):
        g = random_graph(rng)
        m = maximum_matching_general(g)
        assert m.is_valid_for(g)
        assert len(m) == brute_force_max_matching(g)
        b = random_bipartite(rng)
        mb = maximum_matching_bipartite(b)
        assert mb.is_valid_for(b)
        assert len(mb) == brute_force_max_matching(b) == len(maximum_matching_general(b))
