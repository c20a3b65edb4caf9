"""The set function mapping a driver set to its controllable subspace dimension.

f(D) is the number of independent time-respecting paths from driver copies to
the final layer, computed as unit-capacity max-flow on the layered graph.  A
FlowSession carries the residual across incremental driver additions so that
marginal gains cost one re-augmentation instead of a full recomputation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import flow
from .temporal_graph import LayeredFlowGraph, TemporalNetwork, build_layered


def controllable_dimension(net: TemporalNetwork, drivers,
                           layered: LayeredFlowGraph | None = None) -> int:
    """Dimension of the maximum controllable subspace for ``drivers``."""
    g = layered if layered is not None else build_layered(net)
    return flow.evaluate_drivers(g, drivers).flow


def is_fully_controllable(net: TemporalNetwork, drivers,
                          layered: LayeredFlowGraph | None = None) -> bool:
    return controllable_dimension(net, drivers, layered) == net.n


class FlowSession:
    """Incremental f evaluation over a growing driver set.

    All higher-level selection code goes through sessions, so the online
    residual update is the single source of truth for marginal gains.
    """

    def __init__(self, net: TemporalNetwork, layered: LayeredFlowGraph | None = None,
                 _state: flow.ResidualState | None = None):
        self.net = net
        self.graph = layered if layered is not None else build_layered(net)
        self.state = _state if _state is not None else flow.new_state(self.graph)

    @property
    def value(self) -> int:
        return self.state.flow

    @property
    def drivers(self) -> frozenset[int]:
        return self.state.drivers

    def add(self, node: int) -> int:
        """Attach ``node`` and return its marginal gain."""
        return flow.online_maxflow(self.state, node)

    def fork(self) -> "FlowSession":
        """Independent session sharing the graph but not the residual."""
        return FlowSession(self.net, self.graph, flow.clone_state(self.state))


class DimensionCache:
    """Memoized f values for one network, keyed by the sorted driver set."""

    def __init__(self, net: TemporalNetwork):
        self.net = net
        self.graph = build_layered(net)
        self._memo: dict[tuple[int, ...], int] = {}
        self.hits = 0
        self.misses = 0

    def dimension(self, drivers) -> int:
        key = tuple(sorted(set(drivers)))
        val = self._memo.get(key)
        if val is None:
            self.misses += 1
            val = flow.evaluate_drivers(self.graph, key).flow
            self._memo[key] = val
        else:
            self.hits += 1
        return val


@dataclass
class SubmodularityReport:
    trials: int
    submodular_violations: int = 0
    monotone_violations: int = 0
    examples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.submodular_violations == 0 and self.monotone_violations == 0


def check_submodular(net: TemporalNetwork, trials: int, seed: int = 0) -> SubmodularityReport:
    """Sample nested pairs P ⊆ Q and x ∉ Q; check diminishing returns and monotonicity.

    Reports violations of f(P+x) - f(P) >= f(Q+x) - f(Q) and of
    f(P+x) >= f(P); both counts are expected to be zero.
    """
    rng = random.Random(seed)
    cache = DimensionCache(net)
    nodes = list(range(net.n))
    report = SubmodularityReport(trials=trials)
    for _ in range(trials):
        x = rng.choice(nodes)
        rest = [v for v in nodes if v != x]
        q_size = rng.randint(0, len(rest))
        q = rng.sample(rest, q_size)
        p = rng.sample(q, rng.randint(0, q_size)) if q_size else []
        f_p = cache.dimension(p)
        f_q = cache.dimension(q)
        f_px = cache.dimension(p + [x])
        f_qx = cache.dimension(q + [x])
        if f_px - f_p < f_qx - f_q:
            report.submodular_violations += 1
            if len(report.examples) < 10:
                report.examples.append(("submodular", sorted(p), sorted(q), x))
        if f_px < f_p or f_qx < f_q:
            report.monotone_violations += 1
            if len(report.examples) < 10:
                report.examples.append(("monotone", sorted(p), sorted(q), x))
    return report
