"""Random and adversarial k-partitioning of a graph's edges."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .graph import Graph, GraphFormatError
from .rng import SeedLike, as_seed

__all__ = [
    "Partition",
    "random_k_partition",
    "shard",
    "adversarial_partition",
    "ADVERSARIAL_STRATEGIES",
    "format_partition",
    "parse_partition",
    "save_partition",
    "load_partition",
]

ADVERSARIAL_STRATEGIES = ("round-robin", "contiguous-by-left-endpoint")
_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of every edge of ``source`` to one of ``k`` shards.

    Shards keep the full vertex set of the source; empty shards are legal.
    """

    source: Graph
    k: int
    assignment: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.shape != (self.source.num_edges,):
            raise ValueError("assignment must have one entry per edge")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if a.size and (a.min() < 0 or a.max() >= self.k):
            raise ValueError(f"shard ids must lie in [0, {self.k})")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    def shard(self, i: int) -> Graph:
        if not 0 <= i < self.k:
            raise IndexError(f"shard id {i} outside [0, {self.k})")
        return self.source.edge_subgraph(self.assignment == i)

    def shards(self) -> list[Graph]:
        return [self.shard(i) for i in range(self.k)]

    def shard_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def shard_edge_indices(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == i)


def random_k_partition(g: Graph, k: int, seed: SeedLike, n_jobs: int = 1) -> Partition:
    """Send each edge independently to a uniform shard in ``[0, k)``.

    Edge ``j`` draws from counter ``j`` of the seed's ``"partition"``
    stream, so the result does not depend on ``n_jobs``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rs = as_seed(seed)
    m = g.num_edges

    def chunk(start: int) -> np.ndarray:
        u = rs.counter_uniform("partition", start, min(_CHUNK, m - start))
        return np.minimum((u * k).astype(np.int64), k - 1)

    starts = range(0, m, _CHUNK)
    if n_jobs > 1 and m > _CHUNK:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(chunk, starts))
    else:
        parts = [chunk(s) for s in starts]
    assignment = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    return Partition(g, k, assignment)


def shard(p: Partition, i: int) -> Graph:
    """Subgraph on the full vertex set with exactly the edges sent to ``i``."""
    return p.shard(i)


def adversarial_partition(g: Graph, k: int, strategy: str) -> Partition:
    """Deterministic partitions used as a contrast to random partitioning.

    ``round-robin`` sends edge ``j`` to ``j mod k``.
    ``contiguous-by-left-endpoint`` splits the left vertices (or all
    vertices, for non-bipartite graphs, by smaller endpoint) into ``k``
    contiguous id blocks and sends each edge to its left endpoint's block.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    m = g.num_edges
    if strategy == "round-robin":
        assignment = np.arange(m, dtype=np.int64) % k
    elif strategy == "contiguous-by-left-endpoint":
        e = g.edges
        if g.is_bipartite:
            left = np.where(e[:, 0] < g.n_left, e[:, 0], e[:, 1])
            span = max(g.n_left, 1)
        else:
            left = np.minimum(e[:, 0], e[:, 1])
            span = max(g.num_vertices, 1)
        assignment = (left * k) // span
    else:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {ADVERSARIAL_STRATEGIES}")
    return Partition(g, k, assignment)


# -- replay format: '# k=<k>' then lines 'edge_index shard_id' -----------


def format_partition(p: Partition) -> str:
    lines = [f"# k={p.k}"]
    lines.extend(f"{j} {s}" for j, s in enumerate(p.assignment.tolist()))
    return "\n".join(lines) + "\n"


def parse_partition(text: str, g: Graph, k: Optional[int] = None) -> Partition:
    assignment = np.full(g.num_edges, -1, dtype=np.int64)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("k=") and k is None:
                k = int(body[2:])
            continue
        try:
            j, s = (int(t) for t in line.split())
        except ValueError:
            raise GraphFormatError(f"expected 'edge_index shard_id', got {line!r}", lineno) from None
        if not 0 <= j < g.num_edges:
            raise GraphFormatError(f"edge index {j} outside [0, {g.num_edges})", lineno)
        if assignment[j] != -1:
            raise GraphFormatError(f"edge {j} assigned twice", lineno)
        assignment[j] = s
    if (assignment == -1).any():
        raise GraphFormatError(f"edge {int(np.argmax(assignment == -1))} has no shard", None)
    if k is None:
        k = int(assignment.max()) + 1 if assignment.size else 1
    return Partition(g, k, assignment)


def save_partition(p: Partition, path: Union[str, "os.PathLike[str]"]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_partition(p))


def load_partition(path: Union[str, "os.PathLike[str]"], g: Graph) -> Partition:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_partition(fh.read(), g)
