"""Peeling-based vertex cover coresets.

Each machine repeatedly removes vertices whose degree in its shrinking
shard clears a geometrically decreasing threshold ``n/(k*2^(j+1))``.
Removed vertices are a fixed part of the cover; the sparse remainder is
sent to the coordinator, which covers it with a 2-approximation.

All logarithms are base 2 and all threshold comparisons are exact
integer arithmetic.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .encoding import Message, bits_per_vertex, message_bits
from .graph import Graph, GraphError, GraphFormatError, VertexSet, parse_graph, format_graph
from .partition import random_k_partition
from .rng import SeedLike
from .vertex_cover import is_vertex_cover, two_approx_vc

__all__ = [
    "RegimeWarning",
    "PeelingTrace",
    "VcCoreset",
    "HypotheticalTrace",
    "peeling_depth",
    "vc_coreset",
    "merge_vc",
    "vc_message",
    "merge_vc_messages",
    "hypothetical_peeling",
    "sandwich_check",
    "group_size",
    "quotient_graph",
    "expand_cover",
    "grouped_vc_protocol",
    "format_vc_coreset",
    "parse_vc_coreset",
    "warn_if_outside_regime",
]


class RegimeWarning(UserWarning):
    """The solution is too small for the ``omega(k log n)`` regime the guarantees assume."""


def warn_if_outside_regime(solution_size: int, k: int, n: int) -> None:
    if n > 1 and solution_size < 4 * k * math.log2(n):
        warnings.warn(
            f"solution size {solution_size} is below 4*k*log2(n) = {4 * k * math.log2(n):.1f}; "
            "approximation guarantees assume a larger optimum",
            RegimeWarning,
            stacklevel=3,
        )


def _ratio_within_log_bound(x: Fraction, n: int) -> bool:
    """Exact test of ``x <= 4*log2(n)``."""
    if n <= 1:
        return x <= 0
    f = 4 * math.log2(n)
    if abs(float(x) - f) > 1e-9 * f:
        return float(x) <= f
    # x/4 = a/b  ->  x <= 4 log2 n  <=>  2^a <= n^b
    q = x / 4
    return (1 << q.numerator) <= n ** q.denominator


def peeling_depth(n: int, k: int) -> int:
    """Smallest integer ``delta >= 1`` with ``n/(k*2^delta) <= 4*log2(n)``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if n <= 1:
        return 1
    delta = 1
    while not _ratio_within_log_bound(Fraction(n, k << delta), n):
        delta += 1
    return delta


@dataclass(frozen=True)
class PeelingTrace:
    n: int
    k: int
    delta: int
    levels: tuple[frozenset, ...]
    thresholds: tuple[Fraction, ...]

    @property
    def residual_degree_bound(self) -> Fraction:
        """Every residual vertex has degree strictly below this (when delta >= 2)."""
        return Fraction(self.n, self.k << self.delta)


@dataclass(frozen=True)
class VcCoreset:
    fixed_solution: VertexSet
    residual: Graph
    trace: PeelingTrace

    @property
    def universe(self) -> tuple[int, Optional[int]]:
        return self.residual.universe


def vc_coreset(shard: Graph, n: int, k: int) -> VcCoreset:
    """Peel high-degree vertices off one shard.

    ``n`` is the per-side vertex count of the source graph (its
    ``side_size``) and ``k`` the number of shards.  For ``j = 1..delta-1``
    the vertices of degree ``>= n/(k*2^(j+1))`` in the current residual are
    removed together with their edges; degrees are recomputed after every
    level.
    """
    delta = peeling_depth(n, k)
    e = shard.edges
    alive = np.ones(len(e), dtype=bool)
    levels = []
    thresholds = []
    removed = np.zeros(shard.num_vertices, dtype=bool)
    for j in range(1, delta):
        scale = k << (j + 1)
        thresholds.append(Fraction(n, scale))
        live = e[alive]
        deg = np.bincount(live.ravel(), minlength=shard.num_vertices)
        # deg >= n / (k * 2^(j+1)), compared without division
        level = np.flatnonzero((deg > 0) & (deg * scale >= n))
        levels.append(frozenset(level.tolist()))
        if level.size:
            removed[level] = True
            alive &= ~(removed[e[:, 0]] | removed[e[:, 1]])
    residual = shard.edge_subgraph(alive)
    fixed = frozenset(np.flatnonzero(removed).tolist())
    trace = PeelingTrace(n, k, delta, tuple(levels), tuple(thresholds))
    return VcCoreset(fixed, residual, trace)


def _check_universes(items: Sequence) -> tuple[int, Optional[int]]:
    if not items:
        raise ValueError("need at least one coreset")
    universe = items[0].universe
    for c in items[1:]:
        if c.universe != universe:
            raise ValueError(f"coresets over different vertex universes: {universe} vs {c.universe}")
    return universe


def merge_vc(coresets: Sequence[VcCoreset]) -> VertexSet:
    """Union of fixed solutions plus a 2-approximate cover of all residuals."""
    n, n_left = _check_universes(coresets)
    fixed: set[int] = set()
    parts = []
    for c in coresets:
        fixed |= c.fixed_solution
        parts.append(c.residual.edges)
    edges = np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    union = Graph(n, edges, n_left=n_left, multigraph=True, validate=False).simple()
    return frozenset(fixed) | two_approx_vc(union)


def vc_message(c: VcCoreset, origin: int) -> Message:
    """Fixed vertices plus the de-duplicated residual edge list."""
    residual = c.residual.simple() if c.residual.multigraph else c.residual
    return Message(
        origin=origin,
        edges=tuple(map(tuple, residual.edges.tolist())),
        fixed_vertices=tuple(sorted(c.fixed_solution)),
        num_vertices=c.residual.num_vertices,
        n_left=c.residual.n_left,
    )


def merge_vc_messages(messages: Sequence[Message]) -> VertexSet:
    """Coordinator side of the vertex cover protocol; sees only messages."""
    universe = _check_universes([_MessageView(m) for m in messages])
    n, n_left = universe
    fixed = {v for m in messages for v in m.fixed_vertices}
    edges = [e for m in messages for e in m.edges]
    union = Graph(n, edges, n_left=n_left, multigraph=True, validate=False).simple()
    return frozenset(fixed) | two_approx_vc(union)


@dataclass(frozen=True)
class _MessageView:
    message: Message

    @property
    def universe(self):
        return (self.message.num_vertices, self.message.n_left)


# -- analysis-only peeling on the whole graph ---------------------------


@dataclass(frozen=True)
class HypotheticalTrace:
    n: int
    t: int
    o_levels: tuple[frozenset, ...]
    obar_levels: tuple[frozenset, ...]
    residuals: tuple[Graph, ...]


def hypothetical_peeling(g: Graph, opt: Iterable[int], n: Optional[int] = None) -> HypotheticalTrace:
    """Peeling driven by a known optimal cover ``opt``.

    Starting from ``g`` without the edges inside ``opt``, round ``j``
    removes cover vertices of degree ``>= n/2^j`` and non-cover vertices of
    degree ``>= n/2^(j+2)``, for ``j = 1..ceil(log2 n)``.
    """
    opt = frozenset(opt)
    if not is_vertex_cover(g, opt):
        raise ValueError("opt is not a vertex cover of g")
    n = g.side_size if n is None else int(n)
    t = max(1, math.ceil(math.log2(n))) if n > 1 else 1
    in_opt = np.zeros(g.num_vertices, dtype=bool)
    in_opt[list(opt)] = True
    e = g.edges
    alive = ~(in_opt[e[:, 0]] & in_opt[e[:, 1]]) if len(e) else np.zeros(0, dtype=bool)
    removed = np.zeros(g.num_vertices, dtype=bool)
    o_levels, obar_levels, residuals = [], [], [g.edge_subgraph(alive)]
    for j in range(1, t + 1):
        deg = np.bincount(e[alive].ravel(), minlength=g.num_vertices)
        hit_opt = in_opt & (deg > 0) & (deg * (1 << j) >= n)
        hit_rest = ~in_opt & (deg > 0) & (deg * (1 << (j + 2)) >= n)
        o_levels.append(frozenset(np.flatnonzero(hit_opt).tolist()))
        obar_levels.append(frozenset(np.flatnonzero(hit_rest).tolist()))
        removed |= hit_opt | hit_rest
        if len(e):
            alive &= ~(removed[e[:, 0]] | removed[e[:, 1]])
        residuals.append(g.edge_subgraph(alive))
    return HypotheticalTrace(n, t, tuple(o_levels), tuple(obar_levels), tuple(residuals))


def sandwich_check(shard_trace: PeelingTrace, hyp: HypotheticalTrace, opt: Iterable[int]) -> bool:
    """Containment of a shard's peeling levels between the analysis levels.

    For every prefix ``t`` of the shard's levels, the cover vertices peeled
    so far must include every ``O_j`` with ``j <= t``, and the non-cover
    vertices peeled so far must lie inside the union of ``Obar_j``, ``j <= t``.
    """
    opt = frozenset(opt)
    peeled_in: set[int] = set()
    peeled_out: set[int] = set()
    must_have: set[int] = set()
    allowed: set[int] = set()
    for j, level in enumerate(shard_trace.levels):
        peeled_in |= level & opt
        peeled_out |= level - opt
        if j < len(hyp.o_levels):
            must_have |= hyp.o_levels[j]
            allowed |= hyp.obar_levels[j]
        if not must_have <= peeled_in or not peeled_out <= allowed:
            return False
    return True


# -- vertex grouping for the communication/approximation trade-off -------


def group_size(n: int, alpha: float) -> int:
    """``max(1, floor(alpha / log2 n))``."""
    if n <= 1:
        return 1
    return max(1, math.floor(alpha / math.log2(n)))


def quotient_graph(g: Graph, gsize: int) -> Graph:
    """Contract contiguous id blocks of ``gsize`` vertices per side.

    Parallel quotient edges are kept, so the result is a multigraph.
    """
    if gsize < 1:
        raise ValueError("group size must be at least 1")
    if gsize == 1:
        return Graph(g.num_vertices, g.edges, g.n_left, multigraph=True, validate=False)
    if not g.is_bipartite:
        raise GraphError("vertex grouping with group size > 1 needs a bipartite graph")
    nl = -(-g.n_left // gsize)
    nr = -(-g.n_right // gsize)
    e = g.edges
    mapped = np.where(e < g.n_left, e // gsize, nl + (e - g.n_left) // gsize)
    return Graph(nl + nr, mapped, n_left=nl, multigraph=True, validate=False)


def expand_cover(cover: Iterable[int], gsize: int, g: Graph) -> VertexSet:
    """Replace every super-vertex by all original vertices of its group."""
    if gsize == 1:
        return frozenset(cover)
    nl = -(-g.n_left // gsize)
    out: list[int] = []
    for s in cover:
        if s < nl:
            out.extend(range(s * gsize, min((s + 1) * gsize, g.n_left)))
        else:
            base = g.n_left + (s - nl) * gsize
            out.extend(range(base, min(base + gsize, g.num_vertices)))
    return frozenset(out)


def grouped_vc_protocol(g: Graph, k: int, alpha: float, seed: SeedLike) -> tuple[VertexSet, int]:
    """Run the peeling coreset on a vertex-grouped quotient of ``g``.

    Groups have ``max(1, floor(alpha/log2 n))`` vertices; the chosen
    super-vertices are expanded back.  Returns the cover of ``g`` and the
    total bits sent to the coordinator.
    """
    gsize = group_size(g.side_size, alpha)
    q = quotient_graph(g, gsize)
    p = random_k_partition(q, k, seed)
    messages = [vc_message(vc_coreset(p.shard(i), q.side_size, k), i) for i in range(k)]
    bpv = bits_per_vertex(q.num_vertices)
    bits = sum(message_bits(m, bpv) for m in messages)
    cover = expand_cover(merge_vc_messages(messages), gsize, g)
    if not is_vertex_cover(g, cover):
        raise AssertionError("grouped protocol produced an invalid cover")
    warn_if_outside_regime(len(cover), k, g.side_size)
    return cover, bits


# -- serialisation: graph-core text with the trace in comment lines -------


def format_vc_coreset(c: VcCoreset) -> str:
    tr = c.trace
    comments = [
        f"vc-coreset n={tr.n} k={tr.k} delta={tr.delta}",
        "fixed: " + " ".join(map(str, sorted(c.fixed_solution))),
    ]
    for j, level in enumerate(tr.levels, start=1):
        comments.append(f"level {j}: " + " ".join(map(str, sorted(level))))
    return format_graph(c.residual, comments)


def parse_vc_coreset(text: str) -> VcCoreset:
    meta: dict[str, int] = {}
    fixed: list[int] = []
    levels: dict[int, frozenset] = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            continue
        body = line[1:].strip()
        if body.startswith("vc-coreset"):
            for tok in body.split()[1:]:
                key, _, val = tok.partition("=")
                meta[key] = int(val)
        elif body.startswith("fixed:"):
            fixed = [int(x) for x in body[len("fixed:"):].split()]
        elif body.startswith("level "):
            head, _, rest = body.partition(":")
            levels[int(head.split()[1])] = frozenset(int(x) for x in rest.split())
    if not {"n", "k", "delta"} <= meta.keys():
        raise GraphFormatError("missing '# vc-coreset n=.. k=.. delta=..' line")
    residual = parse_graph(text)
    n, k, delta = meta["n"], meta["k"], meta["delta"]
    ordered = tuple(levels.get(j, frozenset()) for j in range(1, delta))
    thresholds = tuple(Fraction(n, k << (j + 1)) for j in range(1, delta))
    return VcCoreset(frozenset(fixed), residual, PeelingTrace(n, k, delta, ordered, thresholds))
