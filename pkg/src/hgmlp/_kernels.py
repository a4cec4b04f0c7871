"""Hot kernel for the smoothness penalty: per-hyperedge max-pair search.

Two interchangeable backends:

  - a numba @njit kernel (default when numba imports cleanly), and
  - a pure-numpy fallback, selected by setting HGMLP_NO_NUMBA=1.

Both accumulate squared distances feature-by-feature in the same order,
so their outputs are bitwise identical; `benchmarks/kernel_bench.py`
compares their throughput. Everything downstream (loss value, gradient)
is computed once, in numpy, from the kernel outputs.
"""

import os

import numpy as np

_ENV_FLAG = "HGMLP_NO_NUMBA"


def _numba_disabled():
    return os.environ.get(_ENV_FLAG, "").strip() not in ("", "0")


try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def max_pair_search_numpy(z, members, offsets):
    """Numpy backend: vectorized over hyperedges grouped by cardinality.

    Returns (per_edge_max, pairs): the largest squared pairwise distance
    within each hyperedge and the node pair attaining it, ties resolved
    to the lexicographically smallest pair. Singletons get (0.0, (-1,-1)).
    """
    m = len(offsets) - 1
    per_edge = np.zeros(m, dtype=np.float64)
    pairs = np.full((m, 2), -1, dtype=np.int64)
    card = np.diff(offsets)
    for s in np.unique(card):
        if s < 2:
            continue
        rows = np.nonzero(card == s)[0]
        starts = offsets[rows]
        idx = members[starts[:, None] + np.arange(s)]  # (k, s) node ids
        p_pos, q_pos = np.triu_indices(s, k=1)  # lexicographic pair order
        a = idx[:, p_pos]
        b = idx[:, q_pos]
        dist = np.zeros_like(a, dtype=np.float64)
        for t in range(z.shape[1]):  # sequential over features, see module doc
            zt = z[:, t]
            diff = zt[a] - zt[b]
            dist += diff * diff
        best = np.argmax(dist, axis=1)  # first max = smallest (j, k)
        k = np.arange(len(rows))
        per_edge[rows] = dist[k, best]
        pairs[rows, 0] = a[k, best]
        pairs[rows, 1] = b[k, best]
    return per_edge, pairs


if _HAVE_NUMBA:

    @njit(cache=True)
    def _max_pair_search_jit(z, members, offsets):
        m = len(offsets) - 1
        d = z.shape[1]
        per_edge = np.zeros(m, dtype=np.float64)
        pairs = np.full((m, 2), -1, dtype=np.int64)
        for e in range(m):
            lo = offsets[e]
            hi = offsets[e + 1]
            best = -1.0
            for p in range(lo, hi - 1):
                a = members[p]
                for q in range(p + 1, hi):
                    b = members[q]
                    acc = 0.0
                    for t in range(d):
                        diff = z[a, t] - z[b, t]
                        acc += diff * diff
                    if acc > best:
                        best = acc
                        pairs[e, 0] = a
                        pairs[e, 1] = b
            if best >= 0.0:
                per_edge[e] = best
        return per_edge, pairs

    def max_pair_search_numba(z, members, offsets):
        """Numba backend; bitwise equal to the numpy one."""
        return _max_pair_search_jit(z, members, offsets)

else:
    max_pair_search_numba = None


def active_backend():
    """Name of the backend `max_pair_search` will dispatch to."""
    if _HAVE_NUMBA and not _numba_disabled():
        return "numba"
    return "numpy"


def max_pair_search(z, members, offsets):
    """Dispatch the max-pair search to the active backend.

    z: (n, d) float64 embeddings; members/offsets: CSR hyperedge layout.
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    if active_backend() == "numba":
        return max_pair_search_numba(z, members, offsets)
    return max_pair_search_numpy(z, members, offsets)
