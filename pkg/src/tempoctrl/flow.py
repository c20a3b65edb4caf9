"""Unit-capacity max-flow with persistent residual state and online driver insertion.

A ResidualState owns only its capacity array (one byte per half-edge) and the
set of attached drivers; the graph structure lives on the shared
LayeredFlowGraph.  Cloning a state is therefore a single array copy, which is
what makes keeping one candidate residual per node affordable during driver
selection.
"""

from __future__ import annotations

import json

import numpy as np

from . import _kernels
from .temporal_graph import KIND_SOURCE, LayeredFlowGraph


class ResidualState:
    """Mutable residual graph for one driver set over a layered flow graph."""

    __slots__ = ("graph", "cap", "flow", "drivers")

    def __init__(self, graph: LayeredFlowGraph, cap: np.ndarray | None = None,
                 flow: int = 0, drivers: frozenset[int] | None = None):
        self.graph = graph
        self.cap = graph.cap_template.copy() if cap is None else cap
        self.flow = flow
        self.drivers = frozenset() if drivers is None else drivers


def new_state(graph: LayeredFlowGraph) -> ResidualState:
    """Fresh residual for the empty driver set (source attached to nothing)."""
    return ResidualState(graph)


def clone_state(state: ResidualState) -> ResidualState:
    """Independent deep copy; mutating the copy leaves the original intact."""
    return ResidualState(state.graph, state.cap.copy(), state.flow, state.drivers)


def max_flow(state: ResidualState, method: str = "bfs") -> int:
    """Augment until no source-to-sink path remains; returns the increment.

    ``method`` selects the path search ("bfs" gives shortest augmenting paths
    with deterministic ascending-id neighbor order; "dfs" exists to check
    order-independence of the final value).
    """
    mode = {"bfs": _kernels.SEARCH_BFS, "dfs": _kernels.SEARCH_DFS}[method]
    g = state.graph
    inc = _kernels.maxflow(g.indptr, g.adj_eid, g.eto, state.cap, g.source, g.sink, mode)
    state.flow += inc
    return inc


def attach_driver(state: ResidualState, node: int) -> None:
    """Enable the source edges s -> in(node, t) for every layer t in (t0, t1].

    Attachment layers follow the independent-path condition: an input applied
    during step t materialises at the driver's copy in layer t+1, so layer t0
    is never a valid injection point.
    """
    g = state.graph
    if not (0 <= node < g.n):
        raise ValueError(f"driver {node} out of range [0,{g.n})")
    if node in state.drivers:
        raise ValueError(f"driver {node} already attached")
    for eid in g.source_eids[node]:
        # slot is untouched (both halves zero) until enabled
        state.cap[eid] = 1
    state.drivers = state.drivers | {node}


def online_maxflow(state: ResidualState, new_driver: int, method: str = "bfs") -> int:
    """Attach ``new_driver`` to a settled residual and re-augment.

    The returned increment equals f(D + driver) - f(D) for the driver set D
    the state was settled at, because leftover residual (including reverse
    edges of already-routed paths) is reused instead of recomputed.
    """
    attach_driver(state, new_driver)
    return max_flow(state, method)


def evaluate_drivers(graph: LayeredFlowGraph, drivers, method: str = "bfs") -> ResidualState:
    """From-scratch residual for a whole driver set (attach all, then augment)."""
    state = new_state(graph)
    for v in sorted(set(drivers)):
        attach_driver(state, v)
    max_flow(state, method)
    return state


def has_augmenting_path(state: ResidualState) -> bool:
    g = state.graph
    mask = _kernels.reachable_mask(g.indptr, g.adj_eid, g.eto, state.cap, g.source)
    return bool(mask[g.sink])


def residual_to_json(state: ResidualState) -> str:
    """Debug serialization: every enabled edge pair with its residual bits."""
    g = state.graph
    edges = []
    for e in range(g.edge_kind.shape[0]):
        fwd, bwd = 2 * e, 2 * e + 1
        if g.edge_kind[e] == KIND_SOURCE and state.cap[fwd] == 0 and state.cap[bwd] == 0:
            continue  # unattached slot
        edges.append({
            "from": g.describe_node(int(g.eto[bwd])),
            "to": g.describe_node(int(g.eto[fwd])),
            "kind": int(g.edge_kind[e]),
            "residual": int(state.cap[fwd]),
        })
    return json.dumps({
        "flow": state.flow,
        "drivers": sorted(state.drivers),
        "edges": edges,
    }, separators=(",", ":"))
