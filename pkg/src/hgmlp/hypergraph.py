"""Hypergraph container, incidence-graph Laplacian, and structural stats.

Hyperedges are stored as membership lists rather than a dense node-by-edge
incidence matrix; memory is O(sum of edge sizes), matching the sparsity of
real datasets. The Laplacian of the bipartite node/hyperedge incidence
graph is materialized as a scipy sparse matrix on demand.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class Hypergraph:
    """Validated hypergraph: `n` nodes, hyperedges as sorted index tuples.

    Invariants (enforced by `build_hypergraph`):
      - every index in every hyperedge lies in [0, n)
      - within a hyperedge, indices are strictly increasing
      - duplicate hyperedges may appear in the list; empty ones may not
    """

    n: int
    edges: tuple

    @property
    def m(self):
        return len(self.edges)

    @cached_property
    def _flat(self):
        """(members, offsets) in CSR layout, shared by the loss kernels."""
        offsets = np.zeros(self.m + 1, dtype=np.int64)
        for j, e in enumerate(self.edges):
            offsets[j + 1] = offsets[j] + len(e)
        members = np.fromiter(
            (v for e in self.edges for v in e), dtype=np.int64, count=offsets[-1]
        )
        return members, offsets

    @property
    def members(self):
        return self._flat[0]

    @property
    def offsets(self):
        return self._flat[1]


def build_hypergraph(n, edges):
    """Validate and canonicalize raw edge lists into a Hypergraph.

    Within each hyperedge, indices are deduplicated and sorted. Empty
    hyperedges (before or after dedup) are rejected; singletons are kept.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"node count must be positive, got {n}")
    canon = []
    for j, edge in enumerate(edges):
        uniq = sorted(set(int(v) for v in edge))
        if not uniq:
            raise ValueError(f"hyperedge {j} is empty")
        if uniq[0] < 0 or uniq[-1] >= n:
            bad = uniq[0] if uniq[0] < 0 else uniq[-1]
            raise ValueError(
                f"hyperedge {j}: node index {bad} out of range for n={n}"
            )
        canon.append(tuple(uniq))
    return Hypergraph(n=n, edges=tuple(canon))


def degrees(h):
    """Node degrees and hyperedge cardinalities as int64 arrays."""
    node_deg = np.zeros(h.n, dtype=np.int64)
    members, offsets = h._flat
    np.add.at(node_deg, members, 1)
    card = np.diff(offsets)
    return node_deg, card


def incidence_laplacian(h):
    """Laplacian of the bipartite incidence graph, (n+m) x (n+m) CSR.

    Block structure: [[diag(node degrees), -H], [-H^T, diag(edge sizes)]]
    where H is the n x m binary incidence matrix. Symmetric, rows sum to
    zero, positive semidefinite.
    """
    n, m = h.n, h.m
    members, offsets = h._flat
    node_deg, card = degrees(h)
    edge_ids = np.repeat(np.arange(m, dtype=np.int64), card)

    diag = np.concatenate([node_deg, card]).astype(np.float64)
    rows = np.concatenate([np.arange(n + m), members, edge_ids + n])
    cols = np.concatenate([np.arange(n + m), edge_ids + n, members])
    vals = np.concatenate([diag, -np.ones(2 * len(members))])
    lap = sp.coo_matrix((vals, (rows, cols)), shape=(n + m, n + m))
    return lap.tocsr()


def homophily(h, labels):
    """Mean over hyperedges of the fraction of member pairs sharing a label.

    Singleton hyperedges are skipped; if every hyperedge is a singleton
    (or there are none) the measure is undefined. Diagnostic only.
    """
    labels = np.asarray(labels)
    if labels.shape != (h.n,):
        raise ValueError(f"labels must have length n={h.n}, got {labels.shape}")
    fractions = []
    for e in h.edges:
        if len(e) < 2:
            continue
        same = sum(1 for a, b in combinations(e, 2) if labels[a] == labels[b])
        total = len(e) * (len(e) - 1) // 2
        fractions.append(same / total)
    if not fractions:
        raise ValueError("homophily undefined: no hyperedge has >= 2 members")
    return float(np.mean(fractions))
