"""scikit-learn style wrappers.

The estimators take a :class:`~rcoreset.graph.Graph` (or an ``(m, 2)``
edge array) as ``X``.  ``fit`` partitions the graph, builds one coreset
per shard and merges them; ``transform`` returns the composed coreset,
i.e. the union of all shard summaries, as a graph on the same vertices.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .coreset_matching import exact_merge, greedy_merge, matching_coreset, union_graph
from .coreset_vc import merge_vc, vc_coreset
from .graph import Graph
from .partition import random_k_partition
from .protocol import SCHEMES, run_simultaneous

__all__ = ["check_graph", "MatchingCoreset", "VertexCoverCoreset", "SimultaneousProtocol"]


def check_graph(X, *, bipartite: bool = False, n_left: Optional[int] = None) -> Graph:
    """Validate ``X`` and return it as a :class:`Graph`.

    Accepts a Graph, or an integer array of shape ``(m, 2)`` whose vertex
    universe is ``0..max_id``.
    """
    if isinstance(X, Graph):
        g = X
    else:
        arr = np.asarray(X)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"expected an edge array of shape (m, 2), got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            if not np.all(np.mod(arr, 1) == 0):
                raise ValueError("edge array must hold integer vertex ids")
            arr = arr.astype(np.int64)
        num_vertices = int(arr.max()) + 1 if arr.size else 0
        if n_left is not None:
            num_vertices = max(num_vertices, n_left)
        g = Graph(num_vertices, arr, n_left=n_left)
    if bipartite and not g.is_bipartite:
        raise ValueError("this estimator needs a bipartite graph")
    return g


class MatchingCoreset(TransformerMixin, BaseEstimator):
    """Maximum-matching coresets over a random ``k``-partition.

    Parameters
    ----------
    k : int, default=8
        Number of machines.
    merge : {"exact", "greedy"}, default="exact"
        How the coordinator combines the coresets.
    random_state : int, default=0
        Master seed for the partition.

    Attributes
    ----------
    partition_ : Partition
    coresets_ : list of Matching
    matching_ : Matching
        The merged solution.
    trace_ : MergeTrace
        Greedy merge trace (computed for either merge mode).
    """

    def __init__(self, k=8, merge="exact", random_state=0):
        self.k = k
        self.merge = merge
        self.random_state = random_state

    def fit(self, X, y=None):
        if self.merge not in ("exact", "greedy"):
            raise ValueError(f"merge must be 'exact' or 'greedy', got {self.merge!r}")
        g = check_graph(X)
        self.partition_ = random_k_partition(g, self.k, self.random_state)
        self.coresets_ = [matching_coreset(s) for s in self.partition_.shards()]
        greedy, self.trace_ = greedy_merge(self.coresets_)
        self.matching_ = exact_merge(self.coresets_) if self.merge == "exact" else greedy
        self.n_vertices_in_ = g.num_vertices
        return self

    def transform(self, X):
        check_is_fitted(self, "coresets_")
        g = check_graph(X)
        p = random_k_partition(g, self.k, self.random_state)
        return union_graph([matching_coreset(s) for s in p.shards()])

    def fit_transform(self, X, y=None):
        return union_graph(self.fit(X).coresets_)


class VertexCoverCoreset(TransformerMixin, BaseEstimator):
    """Peeling vertex cover coresets over a random ``k``-partition.

    ``fit`` stores the merged cover in ``cover_``; ``transform`` returns the
    union of the residual graphs (the part the coordinator still has to
    cover); ``fixed_`` holds the union of the peeled vertices.
    """

    def __init__(self, k=8, random_state=0):
        self.k = k
        self.random_state = random_state

    def _coresets(self, g):
        p = random_k_partition(g, self.k, self.random_state)
        return p, [vc_coreset(s, g.side_size, self.k) for s in p.shards()]

    def fit(self, X, y=None):
        g = check_graph(X)
        self.partition_, self.coresets_ = self._coresets(g)
        self.cover_ = merge_vc(self.coresets_)
        self.fixed_ = frozenset().union(*(c.fixed_solution for c in self.coresets_))
        self.n_vertices_in_ = g.num_vertices
        return self

    @staticmethod
    def _residual_union(g: Graph, coresets) -> Graph:
        edges = np.concatenate([c.residual.edges for c in coresets])
        return Graph(g.num_vertices, edges, n_left=g.n_left, multigraph=True, validate=False).simple()

    def transform(self, X):
        check_is_fitted(self, "coresets_")
        g = check_graph(X)
        return self._residual_union(g, self._coresets(g)[1])

    def fit_transform(self, X, y=None):
        g = check_graph(X)
        return self._residual_union(g, self.fit(g).coresets_)


class SimultaneousProtocol(BaseEstimator):
    """One run of a coordinator-model scheme; see :func:`run_simultaneous`."""

    def __init__(self, scheme="matching-coreset", k=8, alpha=None, random_state=0, oracle=False, n_jobs=1):
        self.scheme = scheme
        self.k = k
        self.alpha = alpha
        self.random_state = random_state
        self.oracle = oracle
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        g = check_graph(X)
        self.result_ = run_simultaneous(
            g, self.k, self.scheme, {"alpha": self.alpha}, self.random_state,
            oracle=self.oracle, n_jobs=self.n_jobs,
        )
        self.solution_ = self.result_.solution
        self.ledger_ = self.result_.ledger
        return self

    def score(self, X=None, y=None):
        """Inverse approximation ratio (1.0 is optimal); needs ``oracle=True``."""
        check_is_fitted(self, "result_")
        if self.result_.ratio is None:
            raise ValueError("score needs oracle=True")
        return 1.0 / self.result_.ratio
