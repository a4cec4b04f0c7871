"""Training objective: smoothness penalty, cross-entropy, and their sum.

The smoothness penalty averages, over hyperedges, the largest squared
pairwise distance between member embeddings. Its subgradient touches only
the two nodes of each winning pair. `quadratic_form_oracle` computes the
fuller node-to-hyperedge quadratic form that the penalty lower-bounds; it
exists as an independent cross-check, not a training path.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import max_pair_search


@dataclass
class SmoothnessResult:
    value: float
    argmax_pairs: np.ndarray  # (m, 2) node ids, -1 rows for singletons
    gradient: np.ndarray  # (n, d)


@dataclass
class LossBreakdown:
    ce: float
    smooth: float
    alpha: float
    total: float


def smoothness_loss(z, h):
    """Mean over hyperedges of the max pairwise squared embedding distance.

    Ties inside a hyperedge resolve to the lexicographically smallest
    pair; singletons contribute zero; an edgeless hypergraph yields a zero
    value and gradient. The gradient places +-2(z_a - z_b)/m on each
    winning pair (a, b), accumulated across hyperedges.
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    if z.shape[0] != h.n:
        raise ValueError(f"z has {z.shape[0]} rows, hypergraph has n={h.n}")
    grad = np.zeros_like(z)
    if h.m == 0:
        return SmoothnessResult(0.0, np.empty((0, 2), dtype=np.int64), grad)
    per_edge, pairs = max_pair_search(z, h.members, h.offsets)
    value = float(per_edge.sum() / h.m)
    sel = pairs[:, 0] >= 0
    a, b = pairs[sel, 0], pairs[sel, 1]
    diff = (z[a] - z[b]) * (2.0 / h.m)
    np.add.at(grad, a, diff)
    np.add.at(grad, b, -diff)
    return SmoothnessResult(value, pairs, grad)


def quadratic_form_oracle(z_v, z_e, h):
    """Exact sum over hyperedges of the member-to-hyperedge squared distances.

    Equals the incidence-Laplacian quadratic form traced over feature
    columns; kept as a direct double sum so the two routes stay independent.
    """
    z_v = np.asarray(z_v, dtype=np.float64)
    z_e = np.asarray(z_e, dtype=np.float64)
    if z_v.shape[0] != h.n or z_e.shape[0] != h.m:
        raise ValueError("embedding row counts do not match the hypergraph")
    if z_v.shape[1] != z_e.shape[1]:
        raise ValueError("node and hyperedge embeddings differ in width")
    total = 0.0
    for i, e in enumerate(h.edges):
        for v in e:
            d = z_e[i] - z_v[v]
            total += float(d @ d)
    return total


def cross_entropy(scores, y_onehot, mask_idx):
    """Masked mean cross-entropy from raw scores, with its score gradient.

    Uses the fused log-softmax form for stability. Returns
    (value, gradient at scores); the gradient is zero off the mask.
    """
    mask_idx = np.asarray(mask_idx)
    if mask_idx.size == 0:
        raise ValueError("cross-entropy mask is empty")
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_p = shifted - log_z
    value = float(-(y_onehot[mask_idx] * log_p[mask_idx]).sum() / len(mask_idx))
    grad = np.zeros_like(scores)
    p = np.exp(log_p)
    grad[mask_idx] = (p[mask_idx] - y_onehot[mask_idx]) / len(mask_idx)
    return value, grad


def overall_loss(ce, smooth, alpha):
    """Combine the two components: total = ce + alpha * smooth."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    return LossBreakdown(ce=ce, smooth=smooth, alpha=alpha, total=ce + alpha * smooth)


def one_hot(labels, classes):
    """Class indices to one-hot rows; -1 (unknown) rows stay all-zero."""
    labels = np.asarray(labels)
    y = np.zeros((len(labels), classes))
    known = labels >= 0
    y[np.nonzero(known)[0], labels[known]] = 1.0
    return y
