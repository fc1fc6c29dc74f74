"""Hard input distributions, random bipartite graphs and degree-one statistics.

Bipartite instances have ``n`` vertices per side: left ids ``[0, n)``,
right ids ``[n, 2n)``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .coreset_vc import RegimeWarning
from .graph import Graph, GraphError, Matching, VertexSet, induced_degree_one_matching
from .matching import maximum_matching_bipartite
from .partition import Partition
from .rng import SeedLike, as_seed

__all__ = [
    "HardMatchingInstance",
    "HardVcInstance",
    "DegreeOneStats",
    "gen_hard_matching",
    "gen_hard_vc",
    "gen_multiscale_vc",
    "gen_random_bipartite",
    "gen_maximal_trap",
    "trap_hubs",
    "adversarial_maximal_matching",
    "degree_one_stats",
    "single_ball_induced_matching",
    "hard_matching_shard_stats",
    "write_metadata",
]


def _bernoulli_pairs(rng: np.random.Generator, rows: int, cols: int, p: float) -> np.ndarray:
    """Flat indices of a ``rows x cols`` grid, each kept independently w.p. ``p``, sorted."""
    total = rows * cols
    if total == 0 or p <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    count = int(rng.binomial(total, p))
    return np.sort(rng.choice(total, size=count, replace=False)).astype(np.int64)


def _side_size(n: int, alpha: float) -> int:
    size = math.floor(n / alpha)
    if size < 1:
        raise ValueError(f"floor(n/alpha) = floor({n}/{alpha}) < 1")
    return size


def _warn_regime(n: int, alpha: float, k: int) -> None:
    if alpha > min(n / k, k) or alpha < math.log2(max(n, 2)) / 4:
        warnings.warn(
            f"alpha={alpha} is outside log2(n)/4 <= alpha <= min(n/k, k) for n={n}, k={k}",
            RegimeWarning,
            stacklevel=3,
        )


@dataclass(frozen=True)
class HardMatchingInstance:
    graph: Graph
    a: VertexSet
    b: VertexSet
    e_ab: tuple[tuple[int, int], ...]
    planted: Matching
    params: dict = field(default_factory=dict)

    def metadata(self) -> dict[str, Any]:
        return {
            "generator": "hard-matching",
            **self.params,
            "A": sorted(self.a),
            "B": sorted(self.b),
            "planted": [list(e) for e in self.planted.edges],
        }


@dataclass(frozen=True)
class HardVcInstance:
    graph: Graph
    a: VertexSet
    e_star: tuple[int, int]
    v_star: int
    params: dict = field(default_factory=dict)

    def metadata(self) -> dict[str, Any]:
        return {
            "generator": self.params.get("generator", "hard-vc"),
            **{k: v for k, v in self.params.items() if k != "generator"},
            "A": sorted(self.a),
            "v_star": self.v_star,
            "e_star": list(self.e_star),
        }


def gen_hard_matching(n: int, alpha: float, k: int, seed: SeedLike) -> HardMatchingInstance:
    """Sample the hard matching distribution.

    ``A`` and ``B`` of size ``floor(n/alpha)`` are uniform subsets of the two
    sides; every pair of ``A x B`` is an edge w.p. ``k*alpha/n``; the
    complements are joined by a uniformly random perfect matching.
    """
    size = _side_size(n, alpha)
    _warn_regime(n, alpha, k)
    rs = as_seed(seed)
    rng = rs.generator("instance")
    a = np.sort(rng.choice(n, size=size, replace=False))
    b = np.sort(rng.choice(n, size=size, replace=False)) + n
    flat = _bernoulli_pairs(rng, size, size, min(1.0, k * alpha / n))
    e_ab = np.stack([a[flat // size], b[flat % size]], axis=1) if flat.size else np.empty((0, 2), np.int64)

    abar = np.setdiff1d(np.arange(n), a)
    bbar = np.setdiff1d(np.arange(n, 2 * n), b)
    perm = rs.generator("planted").permutation(len(bbar))
    planted = np.stack([abar, bbar[perm]], axis=1)

    g = Graph(2 * n, np.concatenate([e_ab, planted]), n_left=n, validate=False)
    return HardMatchingInstance(
        graph=g,
        a=frozenset(a.tolist()),
        b=frozenset(b.tolist()),
        e_ab=tuple(map(tuple, e_ab.tolist())),
        planted=Matching.on(g, planted.tolist()),
        params={"n": n, "alpha": alpha, "k": k, "seed": rs.master_seed},
    )


def gen_hard_vc(
    n: int, alpha: float, k: int, seed: SeedLike, edge_prob: Optional[float] = None
) -> HardVcInstance:
    """Sample the hard vertex cover distribution.

    ``A`` is a uniform subset of the left side of size ``floor(n/alpha)``;
    every pair of ``A x R`` is an edge w.p. ``k/(2n)`` (or ``edge_prob``);
    one extra edge ``e*`` joins a uniform ``v*`` outside ``A`` to a uniform
    right vertex.
    """
    size = _side_size(n, alpha)
    _warn_regime(n, alpha, k)
    rs = as_seed(seed)
    rng = rs.generator("instance")
    a = np.sort(rng.choice(n, size=size, replace=False))
    p = k / (2 * n) if edge_prob is None else edge_prob
    flat = _bernoulli_pairs(rng, size, n, p)
    e_a = np.stack([a[flat // n], n + flat % n], axis=1) if flat.size else np.empty((0, 2), np.int64)
    return _finish_vc(rs, n, a, e_a, {"generator": "hard-vc", "n": n, "alpha": alpha, "k": k})


def gen_multiscale_vc(n: int, alpha: float, k: int, seed: SeedLike, scales: int = 5) -> HardVcInstance:
    """Hard-VC variant whose cover vertices span several degree scales.

    Each vertex of ``A`` draws a scale ``s`` uniform in ``1..scales`` and
    connects to every right vertex w.p. ``2^-s``, so the peeling levels of
    every shard are populated.  ``v*`` and ``e*`` are planted as in
    :func:`gen_hard_vc`.
    """
    size = _side_size(n, alpha)
    rs = as_seed(seed)
    rng = rs.generator("instance")
    a = np.sort(rng.choice(n, size=size, replace=False))
    s = rng.integers(1, scales + 1, size=size)
    blocks = []
    for i, (u, si) in enumerate(zip(a.tolist(), s.tolist())):
        cols = _bernoulli_pairs(rng, 1, n, 2.0 ** -si)
        blocks.append(np.stack([np.full(cols.size, u), n + cols], axis=1))
    e_a = np.concatenate(blocks) if blocks else np.empty((0, 2), np.int64)
    params = {"generator": "multiscale-vc", "n": n, "alpha": alpha, "k": k, "scales": scales}
    return _finish_vc(rs, n, a, e_a, params)


def _finish_vc(rs, n: int, a: np.ndarray, e_a: np.ndarray, params: dict) -> HardVcInstance:
    rng = rs.generator("planted")
    abar = np.setdiff1d(np.arange(n), a)
    v_star = int(abar[rng.integers(len(abar))]) if abar.size else int(a[0])
    e_star = (v_star, int(n + rng.integers(n)))
    g = Graph(2 * n, np.concatenate([e_a, [e_star]]), n_left=n, validate=False)
    params = {**params, "seed": rs.master_seed}
    return HardVcInstance(g, frozenset(a.tolist()), e_star, v_star, params)


def gen_random_bipartite(n: int, p: float, seed: SeedLike) -> Graph:
    """``G(n, n, p)``: each of the ``n^2`` cross pairs present independently w.p. ``p``."""
    if not 0 <= p <= 1:
        raise ValueError(f"p = {p} outside [0, 1]")
    rng = as_seed(seed).generator("instance")
    flat = _bernoulli_pairs(rng, n, n, p)
    edges = np.stack([flat // n, n + flat % n], axis=1) if flat.size else np.empty((0, 2), np.int64)
    return Graph(2 * n, edges, n_left=n, validate=False)


# -- maximal-matching trap -----------------------------------------------


def gen_maximal_trap(n: int, k: int) -> Graph:
    """Planted perfect matching ``(l_i, r_i)`` plus all of ``L x H``.

    ``H`` is the first ``n // k`` right vertices.  Any maximum matching is
    perfect, but a maximal matching can spend every hub on the left
    endpoints of the planted edges it sees and keep almost nothing else.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    if n % k:
        raise ValueError(f"k={k} must divide n={n}")
    h = n // k
    hub = [(l, n + r) for l in range(n) for r in range(h)]
    planted = [(i, n + i) for i in range(h, n)]
    return Graph(2 * n, hub + planted, n_left=n, validate=False)


def trap_hubs(g: Graph, k: int) -> range:
    n = g.n_left
    return range(n, n + n // k)


def adversarial_maximal_matching(shard: Graph, hubs: range) -> Matching:
    """A maximal matching of a trap shard chosen to block planted edges.

    First a maximum matching of hub edges restricted to left endpoints that
    carry a non-hub edge in this shard, then greedy completion in edge order.
    """
    e = shard.edges
    if len(e) == 0:
        return Matching.empty_for(shard)
    right = np.maximum(e[:, 0], e[:, 1])
    left = np.minimum(e[:, 0], e[:, 1])
    is_hub = (right >= hubs.start) & (right < hubs.stop)
    owners = np.unique(left[~is_hub])
    target = np.flatnonzero(is_hub & np.isin(left, owners))
    first = maximum_matching_bipartite(shard.edge_subgraph(target))
    used = bytearray(shard.num_vertices)
    picked = list(first.edges)
    for u, v in picked:
        used[u] = used[v] = 1
    for u, v in e.tolist():
        if not used[u] and not used[v]:
            used[u] = used[v] = 1
            picked.append((u, v))
    return Matching.on(shard, picked)


# -- degree-one statistics ------------------------------------------------


@dataclass(frozen=True)
class DegreeOneStats:
    l1: VertexSet
    r1: VertexSet
    s_size: int
    t_size: int


def degree_one_stats(g: Graph) -> DegreeOneStats:
    """Left degree-one vertices ``S``, their neighbours, and
    ``|T|`` where ``T`` is the right vertices without edges to ``L \\ S``."""
    if not g.is_bipartite:
        raise GraphError("degree_one_stats needs a bipartite graph")
    deg = g.degrees
    left_deg_one = np.zeros(g.num_vertices, dtype=bool)
    left_deg_one[: g.n_left] = deg[: g.n_left] == 1
    e = g.edges
    lft = np.where(e[:, 0] < g.n_left, e[:, 0], e[:, 1])
    rgt = np.where(e[:, 0] < g.n_left, e[:, 1], e[:, 0])
    from_s = left_deg_one[lft]
    r1 = np.unique(rgt[from_s])
    touched_by_rest = np.zeros(g.num_vertices, dtype=bool)
    touched_by_rest[rgt[~from_s]] = True
    t_size = int(g.n_right - touched_by_rest[g.n_left :].sum())
    l1 = np.flatnonzero(left_deg_one)
    return DegreeOneStats(frozenset(l1.tolist()), frozenset(r1.tolist()), int(l1.size), t_size)


def single_ball_induced_matching(g: Graph) -> Matching:
    """Induced matching built from ``S`` and ``T``.

    Keeps the vertices of ``T`` that receive exactly one edge from ``S``,
    each paired with its single ``S`` neighbour.
    """
    if not g.is_bipartite:
        raise GraphError("single_ball_induced_matching needs a bipartite graph")
    e = g.edges
    lft = np.where(e[:, 0] < g.n_left, e[:, 0], e[:, 1])
    rgt = np.where(e[:, 0] < g.n_left, e[:, 1], e[:, 0])
    in_s = g.degrees[lft] == 1
    outside_t = np.zeros(g.num_vertices, dtype=bool)
    outside_t[rgt[~in_s]] = True
    balls = np.bincount(rgt[in_s], minlength=g.num_vertices)
    keep = in_s & ~outside_t[rgt] & (balls[rgt] == 1)
    return Matching.on(g, np.stack([lft[keep], rgt[keep]], axis=1).tolist())


def hard_matching_shard_stats(inst: HardMatchingInstance, p: Partition) -> dict[str, list[int]]:
    """Per shard: induced degree-one matching size and planted edges received."""
    planted = inst.planted.as_set()
    e = inst.graph.edges
    lo = np.minimum(e[:, 0], e[:, 1])
    hi = np.maximum(e[:, 0], e[:, 1])
    is_planted = np.fromiter(((a, b) in planted for a, b in zip(lo.tolist(), hi.tolist())), bool, len(e))
    induced = []
    planted_counts = []
    for i in range(p.k):
        induced.append(len(induced_degree_one_matching(p.shard(i))))
        planted_counts.append(int(is_planted[p.assignment == i].sum()))
    return {"induced": induced, "planted": planted_counts}


def write_metadata(meta: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)
        fh.write("\n")
