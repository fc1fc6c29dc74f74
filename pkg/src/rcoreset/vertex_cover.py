"""Vertex cover: 2-approximation, Koenig-exact bipartite cover, brute force."""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from .graph import Graph, GraphError, VertexSet
from .matching import _left_adjacency, maximal_matching, maximum_matching_bipartite

__all__ = [
    "two_approx_vc",
    "exact_vc_bipartite",
    "brute_force_vc",
    "is_vertex_cover",
    "BRUTE_FORCE_MAX_VERTICES",
]

BRUTE_FORCE_MAX_VERTICES = 24


def two_approx_vc(g: Graph) -> VertexSet:
    """Both endpoints of the default-order greedy maximal matching."""
    return maximal_matching(g).vertices()


def exact_vc_bipartite(g: Graph) -> VertexSet:
    """Minimum vertex cover of a bipartite graph.

    Z is the set reachable from unmatched left vertices by alternating
    paths; the cover is (L \\ Z) | (R & Z), of size equal to the maximum
    matching.
    """
    if not g.is_bipartite:
        raise GraphError("exact_vc_bipartite needs a bipartite graph")
    if g.num_edges == 0:
        return frozenset()
    mate = maximum_matching_bipartite(g).mate()
    adj = _left_adjacency(g)
    n_left = g.n_left
    reached = bytearray(g.num_vertices)
    queue = deque(u for u in range(n_left) if mate[u] == -1)
    for u in queue:
        reached[u] = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not reached[v]:
                reached[v] = 1
                w = int(mate[v])
                # a maximum matching leaves no free right vertex reachable
                if w != -1 and not reached[w]:
                    reached[w] = 1
                    queue.append(w)
    cover = [u for u in range(n_left) if adj[u] and not reached[u]]
    cover += [v for v in range(n_left, g.num_vertices) if reached[v]]
    return frozenset(cover)


def brute_force_vc(g: Graph) -> int:
    """Exact minimum cover size by branch and bound (at most 24 vertices).

    Branches on the two endpoints of the first uncovered edge; a branch is
    cut once it cannot beat the best cover found so far.
    """
    if g.num_vertices > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(f"instance too large for brute force: {g.num_vertices} vertices")
    edges = sorted({(min(u, v), max(u, v)) for u, v in g.edges.tolist()})
    masks = [(1 << u, 1 << v) for u, v in edges]
    best = len({x for e in edges for x in e})  # all non-isolated vertices

    def search(start: int, chosen: int, size: int) -> None:
        nonlocal best
        if size >= best:
            return
        for i in range(start, len(masks)):
            mu, mv = masks[i]
            if not (chosen & (mu | mv)):
                search(i + 1, chosen | mu, size + 1)
                search(i + 1, chosen | mv, size + 1)
                return
        best = size

    search(0, 0, 0)
    return best


def is_vertex_cover(g: Graph, s: Iterable[int]) -> bool:
    """True iff every edge has an endpoint in ``s``."""
    members = np.zeros(g.num_vertices, dtype=bool)
    for v in s:
        members[g.check_vertex(v)] = True
    if g.num_edges == 0:
        return True
    e = g.edges
    return bool((members[e[:, 0]] | members[e[:, 1]]).all())
