"""Hot graph kernels over flat CSR arrays, JIT-compiled when numba is enabled.

The augmenting-path search and the betweenness accumulation dominate the
runtime of everything above them, so they are written against plain integer
arrays and compiled with ``numba.njit``.  Setting ``TEMPOCTRL_NUMBA=0`` (or
running without numba installed) selects the identical pure-Python/numpy
code path.  ``set_backend`` allows switching at runtime, which the kernel
benchmark uses to time both paths in one process.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    njit = None
    _HAVE_NUMBA = False


SEARCH_BFS = 0
SEARCH_DFS = 1


def _maxflow_impl(indptr, adj_eid, eto, cap, source, sink, search_mode):
    # Unit-capacity augmenting-path loop.  Edge e and e^1 are twins; the
    # origin of e is eto[e ^ 1].  Returns the number of augmentations.
    n = indptr.shape[0] - 1
    parent_edge = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    cursor = np.empty(n, np.int64)
    total = 0
    while True:
        for i in range(n):
            parent_edge[i] = -1
        parent_edge[source] = -2
        reached = False
        if search_mode == SEARCH_BFS:
            head = 0
            tail = 1
            queue[0] = source
            while head < tail and not reached:
                u = queue[head]
                head += 1
                for k in range(indptr[u], indptr[u + 1]):
                    e = adj_eid[k]
                    if cap[e] <= 0:
                        continue
                    v = eto[e]
                    if parent_edge[v] != -1:
                        continue
                    parent_edge[v] = e
                    if v == sink:
                        reached = True
                        break
                    queue[tail] = v
                    tail += 1
        else:
            for i in range(n):
                cursor[i] = indptr[i]
            top = 0
            queue[0] = source
            while top >= 0 and not reached:
                u = queue[top]
                advanced = False
                while cursor[u] < indptr[u + 1]:
                    e = adj_eid[cursor[u]]
                    cursor[u] += 1
                    if cap[e] <= 0:
                        continue
                    v = eto[e]
                    if parent_edge[v] != -1:
                        continue
                    parent_edge[v] = e
                    if v == sink:
                        reached = True
                    else:
                        top += 1
                        queue[top] = v
                    advanced = True
                    break
                if not advanced:
                    top -= 1
        if not reached:
            return total
        v = sink
        while v != source:
            e = parent_edge[v]
            cap[e] -= 1
            cap[e ^ 1] += 1
            v = eto[e ^ 1]
        total += 1


def _reachable_impl(indptr, adj_eid, eto, cap, source, mask):
    # Marks every node reachable from source through positive-residual edges.
    n = indptr.shape[0] - 1
    queue = np.empty(n, np.int64)
    for i in range(n):
        mask[i] = False
    mask[source] = True
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            e = adj_eid[k]
            if cap[e] <= 0:
                continue
            v = eto[e]
            if not mask[v]:
                mask[v] = True
                queue[tail] = v
                tail += 1


def _betweenness_impl(indptr, eto, scores):
    # Brandes accumulation for directed unweighted graphs, all ordered pairs.
    # Edge ids coincide with CSR slot positions; scores has one entry per slot.
    n = indptr.shape[0] - 1
    sigma = np.zeros(n, np.float64)
    delta = np.zeros(n, np.float64)
    dist = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    for s in range(n):
        sigma[s] = 1.0
        dist[s] = 0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = order[head]
            head += 1
            du = dist[u]
            for k in range(indptr[u], indptr[u + 1]):
                v = eto[k]
                if dist[v] == -1:
                    dist[v] = du + 1
                    order[tail] = v
                    tail += 1
                if dist[v] == du + 1:
                    sigma[v] += sigma[u]
        for idx in range(tail - 1, -1, -1):
            w = order[idx]
            dw = dist[w]
            acc = 0.0
            for k in range(indptr[w], indptr[w + 1]):
                x = eto[k]
                if dist[x] == dw + 1:
                    c = sigma[w] / sigma[x] * (1.0 + delta[x])
                    scores[k] += c
                    acc += c
            delta[w] = acc
        for idx in range(tail):
            w = order[idx]
            sigma[w] = 0.0
            delta[w] = 0.0
            dist[w] = -1


_PY_IMPLS = {
    "maxflow": _maxflow_impl,
    "reachable": _reachable_impl,
    "betweenness": _betweenness_impl,
}

_JIT_IMPLS: dict = {}


def _jit(name):
    if name not in _JIT_IMPLS:
        _JIT_IMPLS[name] = njit(cache=True, nogil=True)(_PY_IMPLS[name])
    return _JIT_IMPLS[name]


def _default_backend() -> str:
    raw = os.environ.get("TEMPOCTRL_NUMBA", "").strip().lower()
    if raw in ("0", "false", "no", "off"):
        return "python"
    return "numba" if _HAVE_NUMBA else "python"


_backend = _default_backend()


def set_backend(name: str) -> None:
    """Select the kernel backend: "numba" or "python"."""
    global _backend
    if name not in ("numba", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not _HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    _backend = name


def active_backend() -> str:
    return _backend


def _dispatch(name):
    if _backend == "numba":
        return _jit(name)
    return _PY_IMPLS[name]


def maxflow(indptr, adj_eid, eto, cap, source, sink, search_mode=SEARCH_BFS) -> int:
    return int(_dispatch("maxflow")(indptr, adj_eid, eto, cap, source, sink, search_mode))


def reachable_mask(indptr, adj_eid, eto, cap, source) -> np.ndarray:
    mask = np.empty(indptr.shape[0] - 1, np.bool_)
    _dispatch("reachable")(indptr, adj_eid, eto, cap, source, mask)
    return mask


def edge_betweenness_scores(indptr, eto) -> np.ndarray:
    scores = np.zeros(eto.shape[0], np.float64)
    _dispatch("betweenness")(indptr, eto, scores)
    return scores
