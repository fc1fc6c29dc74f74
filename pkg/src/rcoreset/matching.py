"""Maximal and maximum matchings.

All routines treat parallel edges as a single candidate edge and scan
vertices in increasing id order, so results are deterministic.
"""

from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

import numpy as np

from .graph import Graph, GraphError, Matching

__all__ = [
    "maximal_matching",
    "maximum_matching",
    "maximum_matching_bipartite",
    "maximum_matching_general",
    "brute_force_max_matching",
    "BRUTE_FORCE_MAX_EDGES",
    "BRUTE_FORCE_MAX_ACTIVE_VERTICES",
]

BRUTE_FORCE_MAX_EDGES = 24
BRUTE_FORCE_MAX_ACTIVE_VERTICES = 16


def maximal_matching(g: Graph, order: Optional[Sequence[int]] = None) -> Matching:
    """Greedy maximal matching scanning edges in ``order``.

    ``order`` is a permutation of edge indices and defaults to container order.
    """
    m = g.num_edges
    if order is None:
        idx = range(m)
    else:
        idx = [int(i) for i in order]
        if len(idx) != m or sorted(idx) != list(range(m)):
            raise ValueError("order must be a permutation of the edge indices")
    edges = g.edges.tolist()
    used = bytearray(g.num_vertices)
    picked = []
    for i in idx:
        u, v = edges[i]
        if not used[u] and not used[v]:
            used[u] = used[v] = 1
            picked.append((u, v))
    return Matching.on(g, picked)


def maximum_matching(g: Graph) -> Matching:
    """Hopcroft-Karp for bipartite graphs, blossom contraction otherwise."""
    if g.is_bipartite:
        return maximum_matching_bipartite(g)
    return maximum_matching_general(g)


# -- bipartite ----------------------------------------------------------


def maximum_matching_bipartite(g: Graph) -> Matching:
    """Maximum-cardinality matching by Hopcroft-Karp phases."""
    if not g.is_bipartite:
        raise GraphError("maximum_matching_bipartite needs a bipartite graph")
    n_left = g.n_left
    if g.num_edges == 0:
        return Matching.empty_for(g)
    adj = _left_adjacency(g)
    mate = _hopcroft_karp(n_left, adj, g.num_vertices)
    return Matching.on(g, ((u, mate[u]) for u in range(n_left) if mate[u] != -1))


def _left_adjacency(g: Graph) -> list[list[int]]:
    """Sorted unique right-neighbours of every left vertex, built with numpy."""
    e = g.edges
    left = np.where(e[:, 0] < g.n_left, e[:, 0], e[:, 1])
    right = np.where(e[:, 0] < g.n_left, e[:, 1], e[:, 0])
    keys = np.unique(left * g.num_vertices + right)
    lefts = (keys // g.num_vertices).tolist()
    rights = (keys % g.num_vertices).tolist()
    adj: list[list[int]] = [[] for _ in range(g.n_left)]
    for u, v in zip(lefts, rights):
        adj[u].append(v)
    return adj


def _hopcroft_karp(n_left: int, adj: list[list[int]], num_vertices: int) -> list[int]:
    mate = [-1] * num_vertices
    for u in range(n_left):
        for v in adj[u]:
            if mate[v] == -1:
                mate[u] = v
                mate[v] = u
                break

    while True:
        dist = [-1] * n_left
        queue = [u for u in range(n_left) if mate[u] == -1 and adj[u]]
        for u in queue:
            dist[u] = 0
        limit = -1
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            if limit != -1 and du >= limit:
                continue
            for v in adj[u]:
                w = mate[v]
                if w == -1:
                    if limit == -1:
                        limit = du + 1
                elif dist[w] == -1:
                    dist[w] = du + 1
                    queue.append(w)
        if limit == -1:
            return mate

        ptr = [0] * n_left
        for root in range(n_left):
            if mate[root] != -1 or dist[root] != 0:
                continue
            stack = [root]
            via: list[int] = []
            while stack:
                u = stack[-1]
                nbrs = adj[u]
                pushed = False
                while ptr[u] < len(nbrs):
                    v = nbrs[ptr[u]]
                    ptr[u] += 1
                    w = mate[v]
                    if w == -1:
                        if dist[u] + 1 == limit:
                            # augment along stack / via
                            via.append(v)
                            for a, b in zip(stack, via):
                                mate[a] = b
                                mate[b] = a
                            stack = []
                            pushed = True
                            break
                    elif dist[w] == dist[u] + 1:
                        stack.append(w)
                        via.append(v)
                        pushed = True
                        break
                if not pushed:
                    dist[u] = -2  # dead end for this phase
                    stack.pop()
                    if via:
                        via.pop()


# -- general graphs -----------------------------------------------------


def maximum_matching_general(g: Graph) -> Matching:
    """Maximum-cardinality matching by Edmonds' blossom contraction, O(V^3)."""
    n = g.num_vertices
    if g.num_edges == 0:
        return Matching.empty_for(g)
    adj = g.adjacency
    mate = [-1] * n
    for u in range(n):
        if mate[u] == -1:
            for v in adj[u]:
                if mate[v] == -1:
                    mate[u] = v
                    mate[v] = u
                    break
    for root in range(n):
        if mate[root] == -1 and adj[root]:
            _augment_from(root, adj, mate)
    return Matching.on(g, ((u, mate[u]) for u in range(n) if mate[u] > u))


def _augment_from(root: int, adj: list[list[int]], mate: list[int]) -> bool:
    n = len(adj)
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                in_blossom = [False] * n
                mark_path(v, cur, to, in_blossom)
                mark_path(to, cur, v, in_blossom)
                for i in range(n):
                    if in_blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    # flip the alternating path ending at the free vertex `to`
                    x = to
                    while x != -1:
                        px = parent[x]
                        nxt = mate[px]
                        mate[x] = px
                        mate[px] = x
                        x = nxt
                    return True
                used[mate[to]] = True
                queue.append(mate[to])
    return False


# -- oracle -------------------------------------------------------------


def brute_force_max_matching(g: Graph) -> int:
    """Exact maximum matching size by exhaustive search.

    Branches on the lowest remaining vertex (leave it unmatched or match it
    to each remaining neighbour), memoised on the remaining-vertex bitmask.
    Accepts instances with at most 24 edges, or at most 16 non-isolated
    vertices.
    """
    adj = g.adjacency
    active = [v for v in range(g.num_vertices) if adj[v]]
    if g.num_edges > BRUTE_FORCE_MAX_EDGES and len(active) > BRUTE_FORCE_MAX_ACTIVE_VERTICES:
        raise ValueError(
            f"instance too large for brute force: {g.num_edges} edges, {len(active)} active vertices"
        )
    index = {v: i for i, v in enumerate(active)}
    nbr_mask = [0] * len(active)
    for v in active:
        for w in adj[v]:
            nbr_mask[index[v]] |= 1 << index[w]
    memo: dict[int, int] = {}

    def best(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        result = 0
        rest = mask
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            rest ^= low
            if nbr_mask[i] & mask:
                break
        else:
            memo[mask] = 0
            return 0
        without = mask & ~low
        result = best(without)
        cand = nbr_mask[i] & without
        bound = bin(mask).count("1") // 2
        while cand and result < bound:
            bit = cand & -cand
            cand ^= bit
            result = max(result, 1 + best(without & ~bit))
        memo[mask] = result
        return result

    return best((1 << len(active)) - 1)
