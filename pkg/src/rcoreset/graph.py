"""Immutable graph container, solution types and the edge-list file format.

Bipartite graphs keep their sides contiguous: ids ``[0, n_left)`` are the
left side and ``[n_left, num_vertices)`` the right side.  For the balanced
instances used throughout the package, ``side_size`` is the per-side ``n``
that every threshold formula refers to.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, TextIO, Union

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "GraphFormatError",
    "Matching",
    "VertexSet",
    "load_graph",
    "parse_graph",
    "dump_graph",
    "format_graph",
    "degree",
    "induced_degree_one_matching",
]

VertexSet = frozenset
"""Vertex sets are plain ``frozenset[int]`` values."""

PathLike = Union[str, "os.PathLike[str]"]


class GraphError(ValueError):
    """An edge or vertex violates a graph invariant."""


class GraphFormatError(GraphError):
    """Malformed edge-list text; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Graph:
    """Undirected graph on vertices ``0..num_vertices-1``.

    Parameters
    ----------
    num_vertices : int
        Size of the vertex universe.  Shards and coresets keep the full
        universe of their source graph.
    edges : array-like of shape (m, 2)
        Edge endpoints in emission order.  The order is preserved and every
        "arbitrary" choice made downstream follows it.
    n_left : int, optional
        When given, the graph is bipartite with left side ``[0, n_left)``.
    multigraph : bool, default False
        Allow parallel edges.  Self-loops are never allowed.
    """

    __slots__ = ("num_vertices", "edges", "n_left", "multigraph", "__dict__")

    def __init__(
        self,
        num_vertices: int,
        edges: Union[np.ndarray, Sequence[Sequence[int]]] = (),
        n_left: Optional[int] = None,
        multigraph: bool = False,
        *,
        validate: bool = True,
    ):
        num_vertices = int(num_vertices)
        if num_vertices < 0:
            raise GraphError(f"negative vertex count {num_vertices}")
        arr = np.asarray(edges, dtype=np.int64)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GraphError(f"edges must have shape (m, 2), got {arr.shape}")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.num_vertices = num_vertices
        self.edges = arr
        self.n_left = None if n_left is None else int(n_left)
        self.multigraph = bool(multigraph)
        if validate:
            bad = self._first_violation()
            if bad is not None:
                idx, reason = bad
                u, v = (int(x) for x in arr[idx])
                err = GraphError(f"edge {idx} ({u}, {v}): {reason}")
                err.edge_index = idx
                raise err

    def _first_violation(self) -> Optional[tuple[int, str]]:
        n, arr = self.num_vertices, self.edges
        if self.n_left is not None and not 0 <= self.n_left <= n:
            raise GraphError(f"left side size {self.n_left} outside [0, {n}]")
        if len(arr) == 0:
            return None
        problems = []
        out_of_range = np.flatnonzero((arr < 0).any(axis=1) | (arr >= n).any(axis=1))
        if out_of_range.size:
            problems.append((int(out_of_range[0]), "vertex id out of range"))
        loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
        if loops.size:
            problems.append((int(loops[0]), "self-loop"))
        if self.n_left is not None:
            same_side = np.flatnonzero((arr[:, 0] < self.n_left) == (arr[:, 1] < self.n_left))
            if same_side.size:
                problems.append((int(same_side[0]), "both endpoints on one side of the bipartition"))
        if not problems and not self.multigraph:
            keys = _edge_keys(arr, n)
            order = np.argsort(keys, kind="stable")
            repeat = np.flatnonzero(keys[order][1:] == keys[order][:-1])
            if repeat.size:
                # report the earliest repeated occurrence
                problems.append((int(order[repeat + 1].min()), "duplicate edge in a simple graph"))
        if not problems:
            return None
        return min(problems)

    # -- basic queries -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def is_bipartite(self) -> bool:
        return self.n_left is not None

    @property
    def n_right(self) -> Optional[int]:
        return None if self.n_left is None else self.num_vertices - self.n_left

    @property
    def side_size(self) -> int:
        """Per-side ``n`` for bipartite graphs (the larger side), else ``num_vertices``."""
        if self.n_left is None:
            return self.num_vertices
        return max(self.n_left, self.num_vertices - self.n_left)

    @property
    def universe(self) -> tuple[int, Optional[int]]:
        return (self.num_vertices, self.n_left)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edges.ravel(), minlength=self.num_vertices).astype(np.int64)
        deg.setflags(write=False)
        return deg

    @cached_property
    def adjacency(self) -> list[list[int]]:
        """Sorted, de-duplicated neighbour lists (parallel edges collapse)."""
        adj: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for u, v in self.edges.tolist():
            adj[u].add(v)
            adj[v].add(u)
        return [sorted(s) for s in adj]

    def edge_list(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.edges.tolist()]

    def left_vertices(self) -> range:
        self._require_bipartite()
        return range(self.n_left)

    def right_vertices(self) -> range:
        self._require_bipartite()
        return range(self.n_left, self.num_vertices)

    def is_left(self, v: int) -> bool:
        self._require_bipartite()
        return v < self.n_left

    def _require_bipartite(self) -> None:
        if self.n_left is None:
            raise GraphError("graph has no bipartition")

    def check_vertex(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.num_vertices:
            raise GraphError(f"vertex {v} outside [0, {self.num_vertices})")
        return v

    # -- derived graphs ------------------------------------------------

    def edge_subgraph(self, mask_or_index: np.ndarray) -> "Graph":
        """Same universe, the selected edges in source order."""
        return Graph(
            self.num_vertices,
            self.edges[mask_or_index],
            n_left=self.n_left,
            multigraph=self.multigraph,
            validate=False,
        )

    def with_edges(self, edges, *, multigraph: Optional[bool] = None) -> "Graph":
        return Graph(
            self.num_vertices,
            edges,
            n_left=self.n_left,
            multigraph=self.multigraph if multigraph is None else multigraph,
        )

    def simple(self) -> "Graph":
        """Drop parallel copies, keeping the first occurrence of each edge."""
        if len(self.edges) == 0:
            return Graph(self.num_vertices, self.edges, self.n_left, validate=False)
        _, first = np.unique(_edge_keys(self.edges, self.num_vertices), return_index=True)
        return Graph(self.num_vertices, self.edges[np.sort(first)], self.n_left, validate=False)

    def __repr__(self) -> str:
        extra = ""
        if self.n_left is not None:
            extra += f", n_left={self.n_left}"
        if self.multigraph:
            extra += ", multigraph=True"
        return f"Graph(num_vertices={self.num_vertices}, num_edges={self.num_edges}{extra})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.multigraph == other.multigraph
            and np.array_equal(self.edges, other.edges)
        )

    __hash__ = None  # type: ignore[assignment]


def _edge_keys(arr: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    return lo * max(n, 1) + hi


@dataclass(frozen=True)
class Matching:
    """A vertex-disjoint edge set over a fixed vertex universe.

    Edges are stored as ``(min, max)`` pairs in insertion order; the order
    matters for greedy merging.
    """

    edges: tuple[tuple[int, int], ...]
    num_vertices: int
    n_left: Optional[int] = None
    _edge_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        norm = tuple((min(u, v), max(u, v)) for u, v in ((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "edges", norm)
        object.__setattr__(self, "_edge_set", frozenset(norm))
        seen: set[int] = set()
        for u, v in norm:
            if u == v:
                raise GraphError(f"matching edge ({u}, {v}) is a self-loop")
            if not (0 <= u and v < self.num_vertices):
                raise GraphError(f"matching edge ({u}, {v}) outside [0, {self.num_vertices})")
            if u in seen or v in seen:
                raise GraphError(f"matching edges share a vertex at ({u}, {v})")
            seen.add(u)
            seen.add(v)

    @classmethod
    def empty_for(cls, g: Graph) -> "Matching":
        return cls((), g.num_vertices, g.n_left)

    @classmethod
    def on(cls, g: Graph, pairs: Iterable[tuple[int, int]]) -> "Matching":
        return cls(tuple(pairs), g.num_vertices, g.n_left)

    @property
    def universe(self) -> tuple[int, Optional[int]]:
        return (self.num_vertices, self.n_left)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.edges)

    def __contains__(self, edge: object) -> bool:
        if not isinstance(edge, tuple) or len(edge) != 2:
            return False
        u, v = edge
        return (min(u, v), max(u, v)) in self._edge_set

    def as_set(self) -> frozenset:
        return self._edge_set

    def vertices(self) -> frozenset:
        return frozenset(x for e in self.edges for x in e)

    def mate(self) -> np.ndarray:
        """``mate[v]`` is v's partner, or -1."""
        mate = np.full(self.num_vertices, -1, dtype=np.int64)
        for u, v in self.edges:
            mate[u] = v
            mate[v] = u
        return mate

    def to_graph(self) -> Graph:
        return Graph(self.num_vertices, list(self.edges), self.n_left, validate=False)

    def is_valid_for(self, g: Graph) -> bool:
        """True iff every edge exists in ``g`` (vertex-disjointness is checked on construction)."""
        if self.num_vertices != g.num_vertices:
            return False
        if not self.edges:
            return True
        present = set(_edge_keys(g.edges, g.num_vertices).tolist())
        n = max(g.num_vertices, 1)
        return all(u * n + v in present for u, v in self.edges)


# -- operations ---------------------------------------------------------


def degree(g: Graph, v: int) -> int:
    """Number of incident edge occurrences, parallel edges counted separately."""
    return int(g.degrees[g.check_vertex(v)])


def induced_degree_one_matching(g: Graph) -> Matching:
    """All edges whose two endpoints both have degree exactly one."""
    if g.num_edges == 0:
        return Matching.empty_for(g)
    deg = g.degrees
    e = g.edges
    mask = (deg[e[:, 0]] == 1) & (deg[e[:, 1]] == 1)
    return Matching.on(g, e[mask].tolist())


# -- text format --------------------------------------------------------
#
#   n m [bip nL nR] [multi]
#   u v            (m lines)
#
# Lines starting with '#' are comments.


def parse_graph(text: Union[str, TextIO]) -> Graph:
    stream = io.StringIO(text) if isinstance(text, str) else text
    header = None
    header_line = 0
    rows: list[tuple[int, int]] = []
    linenos: list[int] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            header = _parse_header(tokens, lineno)
            header_line = lineno
            continue
        if len(tokens) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex id in {line!r}", lineno) from None
        rows.append((u, v))
        linenos.append(lineno)
    if header is None:
        raise GraphFormatError("missing header line", None)
    n, m, n_left, multi = header
    if len(rows) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(rows)}", header_line)
    try:
        return Graph(n, rows, n_left=n_left, multigraph=multi)
    except GraphError as exc:
        idx = getattr(exc, "edge_index", None)
        if idx is None:
            raise GraphFormatError(str(exc), header_line) from None
        raise GraphFormatError(str(exc), linenos[idx]) from None


def _parse_header(tokens: list[str], lineno: int) -> tuple[int, int, Optional[int], bool]:
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except (ValueError, IndexError):
        raise GraphFormatError("header must start with 'n m'", lineno) from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative count in header", lineno)
    n_left = None
    multi = False
    rest = tokens[2:]
    i = 0
    while i < len(rest):
        tok = rest[i]
        if tok == "bip":
            try:
                nl, nr = int(rest[i + 1]), int(rest[i + 2])
            except (ValueError, IndexError):
                raise GraphFormatError("'bip' must be followed by 'nL nR'", lineno) from None
            if nl < 0 or nr < 0 or nl + nr != n:
                raise GraphFormatError(f"bipartition sizes {nl}+{nr} do not sum to {n}", lineno)
            n_left = nl
            i += 3
        elif tok == "multi":
            multi = True
            i += 1
        else:
            raise GraphFormatError(f"unknown header token {tok!r}", lineno)
    return n, m, n_left, multi


def load_graph(path: PathLike) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh)


def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    head = [str(g.num_vertices), str(g.num_edges)]
    if g.n_left is not None:
        head += ["bip", str(g.n_left), str(g.n_right)]
    if g.multigraph:
        head.append("multi")
    out = [f"# {c}" for c in comments]
    out.append(" ".join(head))
    out.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(out) + "\n"


def dump_graph(g: Graph, path: PathLike, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_graph(g, comments))
