"""Temporal network data model and the time-layered flow graph construction.

A temporal network is an ordered sequence of directed edge snapshots over a
fixed node set.  Snapshot ``k`` holds the edges active during the transition
from layer ``t0+k`` to layer ``t0+k+1``.  The layered flow graph splits every
(node, layer) pair into an in-copy and an out-copy joined by a unit-capacity
edge so that max-flow counts node-disjoint time-respecting paths.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np


class EdgeListParseError(ValueError):
    """Raised when a temporal edge-list stream cannot be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


@dataclass(frozen=True)
class TemporalNetwork:
    """Ordered snapshots of directed edges over ``n`` labelled nodes.

    ``snapshots[k]`` is the edge set of the transition step ``t0+k``; there
    are exactly ``t1 - t0`` snapshots.  ``self_loops=True`` means every node
    retains its state between consecutive layers (an implicit self-edge in
    every snapshot).
    """

    n: int
    snapshots: tuple[frozenset[tuple[int, int]], ...]
    self_loops: bool = True
    t0: int = 0
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("node count must be positive")
        if not self.snapshots:
            raise ValueError("at least one snapshot required (t1 > t0)")
        for k, snap in enumerate(self.snapshots):
            for (i, j) in snap:
                if not (0 <= i < self.n and 0 <= j < self.n):
                    raise ValueError(f"edge ({i},{j}) in snapshot {k} out of range [0,{self.n})")
        if self.labels and len(self.labels) != self.n:
            raise ValueError("label table size must equal node count")

    @property
    def t1(self) -> int:
        return self.t0 + len(self.snapshots)

    @property
    def dt(self) -> int:
        return len(self.snapshots)

    @property
    def edge_count(self) -> int:
        """Total number of edges over all snapshots (the dataset's M)."""
        return sum(len(s) for s in self.snapshots)

    def label_of(self, node: int) -> str:
        return self.labels[node] if self.labels else str(node)

    def temporal_edges(self) -> list[tuple[int, int, int]]:
        """All (i, j, t) triples in deterministic (t, i, j) order."""
        out = []
        for k, snap in enumerate(self.snapshots):
            t = self.t0 + k
            out.extend((i, j, t) for (i, j) in sorted(snap))
        return out

    def without_edge(self, i: int, j: int, t: int) -> "TemporalNetwork":
        """A copy with the temporal edge (i, j, t) removed."""
        k = t - self.t0
        if not (0 <= k < self.dt) or (i, j) not in self.snapshots[k]:
            raise KeyError(f"no temporal edge ({i},{j},{t})")
        snaps = list(self.snapshots)
        snaps[k] = snaps[k] - {(i, j)}
        return TemporalNetwork(self.n, tuple(snaps), self.self_loops, self.t0, self.labels)

    def without_edges(self, edges: Iterable[tuple[int, int, int]]) -> "TemporalNetwork":
        removed: dict[int, set[tuple[int, int]]] = {}
        for (i, j, t) in edges:
            removed.setdefault(t - self.t0, set()).add((i, j))
        snaps = list(self.snapshots)
        for k, gone in removed.items():
            snaps[k] = snaps[k] - gone
        return TemporalNetwork(self.n, tuple(snaps), self.self_loops, self.t0, self.labels)

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "t0": self.t0,
            "t1": self.t1,
            "self_loops": self.self_loops,
            "snapshots": [[list(e) for e in sorted(s)] for s in self.snapshots],
            "labels": list(self.labels) if self.labels else [str(i) for i in range(self.n)],
        }
        return json.dumps(doc, separators=(",", ":"))

    @staticmethod
    def from_json(text: str) -> "TemporalNetwork":
        doc = json.loads(text)
        snaps = tuple(frozenset((int(i), int(j)) for i, j in snap) for snap in doc["snapshots"])
        if len(snaps) != doc["t1"] - doc["t0"]:
            raise ValueError("snapshot count does not match [t0, t1)")
        return TemporalNetwork(
            n=int(doc["n"]),
            snapshots=snaps,
            self_loops=bool(doc["self_loops"]),
            t0=int(doc["t0"]),
            labels=tuple(doc.get("labels") or ()),
        )


def from_edges(n: int, edges: Iterable[tuple[int, int, int]], dt: int,
               self_loops: bool = True, t0: int = 0) -> TemporalNetwork:
    """Build a network from (i, j, t) triples over ``dt`` transition steps."""
    snaps: list[set[tuple[int, int]]] = [set() for _ in range(dt)]
    for (i, j, t) in edges:
        snaps[t - t0].add((i, j))
    return TemporalNetwork(n, tuple(frozenset(s) for s in snaps), self_loops, t0)


def parse_temporal_edgelist(stream: TextIO | Iterable[str], time_resolution: float,
                            directed: bool = True, self_loops: bool = True) -> TemporalNetwork:
    """Parse ``src dst timestamp`` lines into a binned temporal network.

    Timestamps are binned left-closed: bin = floor((ts - min_ts) / resolution).
    Node labels are arbitrary whitespace-free strings, remapped to a dense
    [0, N) index in sorted label order; the label table is kept on the result.
    Undirected input yields both orientations of every line.  Duplicate edges
    within one bin collapse (capacities are unit).
    """
    if time_resolution <= 0:
        raise ValueError("time resolution must be positive")
    rows: list[tuple[str, str, float]] = []
    for line_no, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EdgeListParseError(f"expected 'src dst timestamp', got {raw.strip()!r}", line_no)
        src, dst, ts_text = parts
        try:
            ts = float(ts_text)
        except ValueError:
            raise EdgeListParseError(f"bad timestamp {ts_text!r}", line_no) from None
        if math.isnan(ts) or math.isinf(ts):
            raise EdgeListParseError(f"bad timestamp {ts_text!r}", line_no)
        rows.append((src, dst, ts))
    if not rows:
        raise EdgeListParseError("no edges")

    labels = sorted({lab for src, dst, _ in rows for lab in (src, dst)})
    index = {lab: i for i, lab in enumerate(labels)}
    min_ts = min(ts for _, _, ts in rows)
    n_bins = 0
    binned: list[tuple[int, int, int]] = []
    for src, dst, ts in rows:
        b = int(math.floor((ts - min_ts) / time_resolution))
        n_bins = max(n_bins, b + 1)
        i, j = index[src], index[dst]
        binned.append((i, j, b))
        if not directed:
            binned.append((j, i, b))
    snaps: list[set[tuple[int, int]]] = [set() for _ in range(n_bins)]
    for (i, j, b) in binned:
        snaps[b].add((i, j))
    return TemporalNetwork(
        n=len(labels),
        snapshots=tuple(frozenset(s) for s in snaps),
        self_loops=self_loops,
        t0=0,
        labels=tuple(labels),
    )


# Edge-pair kind codes in LayeredFlowGraph.edge_kind.
KIND_INTERNAL = 0
KIND_RETENTION = 1
KIND_TEMPORAL = 2
KIND_SINK = 3
KIND_SOURCE = 4


@dataclass(frozen=True)
class LayeredFlowGraph:
    """Split-node unit-capacity auxiliary graph over layers ``t0 .. t1``.

    Node numbering is layer-major, node-minor, in-copy before out-copy:
    ``in(i, t) = 2*((t - t0)*n + i)`` and ``out(i, t) = in(i, t) + 1``.  The
    virtual source and sink occupy the last two ids.  Every possible source
    attachment ``s -> in(v, t)`` for layers ``t in (t0, t1]`` is preallocated
    with zero capacity; attaching a driver flips those slots to capacity one,
    which is what makes online driver insertion a constant-time residual edit.

    Structure arrays are immutable and shared by every residual state built
    on top of this graph.
    """

    net: TemporalNetwork
    n_nodes: int
    source: int
    sink: int
    eto: np.ndarray          # int32[2E] head of each half-edge
    cap_template: np.ndarray  # int8[2E] initial residual capacities
    indptr: np.ndarray       # int64[n_nodes+1] CSR over half-edge ids
    adj_eid: np.ndarray      # int32[2E] half-edge ids grouped by origin
    edge_kind: np.ndarray    # uint8[E] kind code per edge pair
    source_eids: np.ndarray  # int32[n, dt] forward id of s -> in(v, t0+1+r)
    counts: dict = field(repr=False, default_factory=dict)

    @property
    def n(self) -> int:
        return self.net.n

    def in_id(self, node: int, layer: int) -> int:
        return 2 * ((layer - self.net.t0) * self.net.n + node)

    def out_id(self, node: int, layer: int) -> int:
        return self.in_id(node, layer) + 1

    def describe_node(self, node_id: int) -> str:
        if node_id == self.source:
            return "s"
        if node_id == self.sink:
            return "q"
        pair, is_out = divmod(node_id, 2)
        layer, node = divmod(pair, self.net.n)
        side = "out" if is_out else "in"
        return f"{side}({node},{layer + self.net.t0})"

    def auxiliary_edge_count(self) -> int:
        """Complexity-accounting edge count: N*dt + M, or 2N*dt + M with retention."""
        n, dt = self.net.n, self.net.dt
        base = n * dt + self.net.edge_count
        return base + n * dt if self.net.self_loops else base


def build_layered(net: TemporalNetwork) -> LayeredFlowGraph:
    """Construct the layered flow graph for ``net``.

    Deterministic: edge pairs are created internal, retention, temporal
    (in (t, i, j) order), sink, then source slots; adjacency lists are sorted
    by target node id so augmenting-path searches are reproducible.
    """
    n, dt, t0 = net.n, net.dt, net.t0
    layers = dt + 1
    n_pairs = n * layers
    source = 2 * n_pairs
    sink = source + 1
    n_nodes = sink + 1

    temporal = net.temporal_edges()
    m = len(temporal)
    n_retention = n * dt if net.self_loops else 0
    n_source = n * dt
    n_edges = n_pairs + n_retention + m + n + n_source

    efrom = np.empty(n_edges, np.int32)
    eto_fwd = np.empty(n_edges, np.int32)
    kind = np.empty(n_edges, np.uint8)
    cap_fwd = np.ones(n_edges, np.int8)

    pos = 0
    # internal split edges in(i,t) -> out(i,t)
    base = np.arange(n_pairs, dtype=np.int32)
    efrom[pos:pos + n_pairs] = 2 * base
    eto_fwd[pos:pos + n_pairs] = 2 * base + 1
    kind[pos:pos + n_pairs] = KIND_INTERNAL
    pos += n_pairs
    # retention edges out(i,t) -> in(i,t+1)
    if n_retention:
        head = np.arange(n * dt, dtype=np.int32)
        efrom[pos:pos + n_retention] = 2 * head + 1
        eto_fwd[pos:pos + n_retention] = 2 * (head + n)
        kind[pos:pos + n_retention] = KIND_RETENTION
        pos += n_retention
    # temporal edges out(i,t) -> in(j,t+1)
    for (i, j, t) in temporal:
        rel = t - t0
        efrom[pos] = 2 * (rel * n + i) + 1
        eto_fwd[pos] = 2 * ((rel + 1) * n + j)
        kind[pos] = KIND_TEMPORAL
        pos += 1
    # sink edges out(i,t1) -> q
    head = np.arange(n, dtype=np.int32)
    efrom[pos:pos + n] = 2 * (dt * n + head) + 1
    eto_fwd[pos:pos + n] = sink
    kind[pos:pos + n] = KIND_SINK
    pos += n
    # disabled source slots s -> in(v,t) for t in (t0, t1]
    source_eids = np.empty((n, dt), np.int32)
    for v in range(n):
        for r in range(dt):
            efrom[pos] = source
            eto_fwd[pos] = 2 * ((r + 1) * n + v)
            kind[pos] = KIND_SOURCE
            cap_fwd[pos] = 0
            source_eids[v, r] = 2 * pos
            pos += 1
    assert pos == n_edges

    # interleave forward/backward half-edges: ids 2e and 2e+1 are twins (h ^ 1)
    eto = np.empty(2 * n_edges, np.int32)
    eto[0::2] = eto_fwd
    eto[1::2] = efrom
    cap = np.zeros(2 * n_edges, np.int8)
    cap[0::2] = cap_fwd

    half_from = eto[np.arange(2 * n_edges) ^ 1]
    order = np.lexsort((eto, half_from)).astype(np.int32)
    indptr = np.zeros(n_nodes + 1, np.int64)
    np.add.at(indptr, half_from + 1, 1)
    np.cumsum(indptr, out=indptr)

    g = LayeredFlowGraph(
        net=net,
        n_nodes=n_nodes,
        source=source,
        sink=sink,
        eto=eto,
        cap_template=cap,
        indptr=indptr,
        adj_eid=order,
        edge_kind=kind,
        source_eids=source_eids,
        counts={
            "internal": n_pairs,
            "retention": n_retention,
            "temporal": m,
            "sink": n,
            "source_slots": n_source,
        },
    )
    for arr in (g.eto, g.cap_template, g.indptr, g.adj_eid, g.edge_kind, g.source_eids):
        arr.setflags(write=False)
    return g
