"""Maximum-matching coresets and the coordinator-side merges."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .encoding import Message, bits_per_vertex, message_bits
from .graph import Graph, Matching
from .matching import maximum_matching
from .partition import Partition
from .rng import SeedLike, as_seed

__all__ = [
    "MergeTrace",
    "matching_coreset",
    "greedy_merge",
    "exact_merge",
    "union_graph",
    "subsample_coreset",
    "subsampled_matching_protocol",
]


@dataclass(frozen=True)
class MergeTrace:
    """Intermediate matchings ``M(0) = {} ⊆ M(1) ⊆ ... ⊆ M(k)`` of a greedy merge."""

    matchings: tuple[Matching, ...]

    @property
    def sizes(self) -> list[int]:
        return [len(m) for m in self.matchings]

    @property
    def increments(self) -> list[int]:
        s = self.sizes
        return [b - a for a, b in zip(s, s[1:])]


def matching_coreset(shard: Graph) -> Matching:
    """A maximum matching of the shard.

    Any exact matcher is admissible; this one is deterministic
    (Hopcroft-Karp on bipartite shards, blossom contraction otherwise).
    """
    return maximum_matching(shard)


def _common_universe(coresets: Sequence[Matching]) -> tuple[int, int | None]:
    if not coresets:
        raise ValueError("need at least one coreset")
    universe = coresets[0].universe
    for c in coresets[1:]:
        if c.universe != universe:
            raise ValueError(f"coresets over different vertex universes: {universe} vs {c.universe}")
    return universe


def greedy_merge(coresets: Sequence[Matching]) -> tuple[Matching, MergeTrace]:
    """Fold coresets, in order, into one growing maximal matching."""
    n, n_left = _common_universe(coresets)
    used = bytearray(n)
    picked: list[tuple[int, int]] = []
    history = [Matching((), n, n_left)]
    for c in coresets:
        for u, v in c.edges:
            if not used[u] and not used[v]:
                used[u] = used[v] = 1
                picked.append((u, v))
        history.append(Matching(tuple(picked), n, n_left))
    return history[-1], MergeTrace(tuple(history))


def union_graph(coresets: Sequence[Matching]) -> Graph:
    """Simple graph on the shared universe holding every coreset edge once."""
    n, n_left = _common_universe(coresets)
    seen: dict[tuple[int, int], None] = {}
    for c in coresets:
        for e in c.edges:
            seen.setdefault(e, None)
    return Graph(n, list(seen), n_left=n_left, validate=False)


def exact_merge(coresets: Sequence[Matching]) -> Matching:
    """Maximum matching of the union of all coreset edges."""
    return maximum_matching(union_graph(coresets))


def subsample_coreset(coreset: Matching, alpha: float, seed: SeedLike, shard_id: int) -> Matching:
    """Keep each coreset edge independently with probability ``1/alpha``."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if alpha == 1 or not coreset.edges:
        return coreset
    u = as_seed(seed).counter_uniform("subsample", 0, len(coreset), shard_id)
    keep = u < 1.0 / alpha
    kept = tuple(e for e, k in zip(coreset.edges, keep.tolist()) if k)
    return Matching(kept, coreset.num_vertices, coreset.n_left)


def subsampled_matching_protocol(p: Partition, alpha: float, seed: SeedLike) -> tuple[Matching, int]:
    """Each machine sends a ``1/alpha`` subsample of its maximum matching.

    Returns the coordinator's maximum matching of the received edges and the
    total bits sent.
    """
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    g = p.source
    bpv = bits_per_vertex(g.num_vertices)
    received = []
    bits = 0
    for i in range(p.k):
        kept = subsample_coreset(matching_coreset(p.shard(i)), alpha, seed, i)
        bits += message_bits(Message(i, kept.edges), bpv)
        received.append(kept)
    return exact_merge(received), bits
