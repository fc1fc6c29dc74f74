"""One-round simultaneous protocols: machines summarise, the coordinator merges.

The coordinator functions receive :class:`Message` objects only; no shard
graph is ever passed to them.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence, Union

from .coreset_matching import matching_coreset, subsample_coreset
from .coreset_vc import (
    expand_cover,
    group_size,
    merge_vc_messages,
    quotient_graph,
    vc_coreset,
    vc_message,
    warn_if_outside_regime,
)
from .encoding import CommLedger, Message, bits_per_vertex, message_bits
from .graph import Graph, Matching, VertexSet
from .matching import maximum_matching
from .partition import random_k_partition
from .rng import SeedLike, as_seed
from .vertex_cover import brute_force_vc, exact_vc_bipartite, is_vertex_cover, BRUTE_FORCE_MAX_VERTICES

__all__ = [
    "SCHEMES",
    "Message",
    "CommLedger",
    "ProtocolResult",
    "ProtocolError",
    "message_bits",
    "run_simultaneous",
    "coordinate_matching",
    "coordinate_vc",
    "optimum_value",
]

SCHEMES = ("matching-coreset", "matching-subsampled", "vc-coreset", "vc-grouped")
_NEEDS_ALPHA = ("matching-subsampled", "vc-grouped")


class ProtocolError(ValueError):
    """Unknown scheme or missing scheme parameters."""


@dataclass
class ProtocolResult:
    scheme: str
    k: int
    seed: int
    solution: Union[Matching, VertexSet]
    ledger: CommLedger
    valid: bool
    params: dict = field(default_factory=dict)
    instance: dict = field(default_factory=dict)
    optimum: Optional[int] = None

    @property
    def problem(self) -> str:
        return "matching" if self.scheme.startswith("matching") else "vertex-cover"

    @property
    def size(self) -> int:
        return len(self.solution)

    @property
    def ratio(self) -> Optional[float]:
        """Approximation ratio (>= 1) against the oracle optimum, when known."""
        if self.optimum is None:
            return None
        if self.problem == "matching":
            num, den = self.optimum, self.size
        else:
            num, den = self.size, self.optimum
        if den == 0:
            return 1.0 if num == 0 else math.inf
        return num / den

    def to_dict(self) -> dict[str, Any]:
        return {
            "scheme": self.scheme,
            "k": self.k,
            "seed": self.seed,
            "params": self.params,
            "instance": self.instance,
            "solution_size": self.size,
            "per_machine_bits": self.ledger.per_machine,
            "total_bits": self.ledger.total,
            "bits_per_vertex": self.ledger.bits_per_vertex,
            "valid": self.valid,
            "optimum": self.optimum,
            "ratio": self.ratio,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def coordinate_matching(messages: Sequence[Message]) -> Matching:
    """Maximum matching of every edge received."""
    first = messages[0]
    edges = dict.fromkeys(e for m in messages for e in m.edges)
    union = Graph(first.num_vertices, list(edges), n_left=first.n_left, validate=False)
    return maximum_matching(union)


def coordinate_vc(messages: Sequence[Message]) -> VertexSet:
    return merge_vc_messages(messages)


def _matching_message(shard: Graph, i: int, alpha: Optional[float], seed) -> Message:
    c = matching_coreset(shard)
    if alpha is not None:
        c = subsample_coreset(c, alpha, seed, i)
    return Message(i, c.edges, (), shard.num_vertices, shard.n_left)


def optimum_value(g: Graph, problem: str) -> int:
    """Exact optimum: maximum matching size, or minimum cover size for bipartite / tiny graphs."""
    if problem == "matching":
        return len(maximum_matching(g))
    if g.is_bipartite:
        return len(exact_vc_bipartite(g))
    if g.num_vertices <= BRUTE_FORCE_MAX_VERTICES:
        return brute_force_vc(g)
    raise ValueError("exact vertex cover oracle needs a bipartite graph or at most 24 vertices")


def run_simultaneous(
    g: Graph,
    k: int,
    scheme: str,
    params: Optional[Mapping[str, Any]] = None,
    seed: SeedLike = 0,
    *,
    oracle: bool = False,
    n_jobs: int = 1,
    instance: Optional[Mapping[str, Any]] = None,
) -> ProtocolResult:
    """Partition ``g`` at random, let every machine send one message, merge.

    ``params`` must carry ``alpha`` for the subsampled and grouped schemes.
    """
    if scheme not in SCHEMES:
        raise ProtocolError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    params = dict(params or {})
    if scheme in _NEEDS_ALPHA and params.get("alpha") is None:
        raise ProtocolError(f"scheme {scheme!r} needs params['alpha']")
    if k < 1:
        raise ValueError("k must be at least 1")
    rs = as_seed(seed)
    alpha = params.get("alpha")

    gsize = group_size(g.side_size, alpha) if scheme == "vc-grouped" else 1
    work = quotient_graph(g, gsize) if scheme == "vc-grouped" else g
    p = random_k_partition(work, k, rs)
    n = work.side_size

    if scheme.startswith("matching"):
        sub_alpha = alpha if scheme == "matching-subsampled" else None

        def machine(i: int) -> Message:
            return _matching_message(p.shard(i), i, sub_alpha, rs)

    else:

        def machine(i: int) -> Message:
            return vc_message(vc_coreset(p.shard(i), n, k), i)

    if n_jobs > 1 and k > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            messages = list(pool.map(machine, range(k)))
    else:
        messages = [machine(i) for i in range(k)]

    ledger = CommLedger.from_messages(messages, bits_per_vertex(work.num_vertices))
    if scheme.startswith("matching"):
        solution: Union[Matching, VertexSet] = coordinate_matching(messages)
        valid = solution.is_valid_for(g)
        problem = "matching"
    else:
        solution = expand_cover(coordinate_vc(messages), gsize, g)
        valid = is_vertex_cover(g, solution)
        problem = "vertex-cover"
    warn_if_outside_regime(len(solution), k, g.side_size)
    if gsize > 1:
        params["group_size"] = gsize
    return ProtocolResult(
        scheme=scheme,
        k=k,
        seed=rs.master_seed,
        solution=solution,
        ledger=ledger,
        valid=valid,
        params=params,
        instance=dict(instance or {"num_vertices": g.num_vertices, "num_edges": g.num_edges}),
        optimum=optimum_value(g, problem) if oracle else None,
    )
