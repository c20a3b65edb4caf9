"""Driver-node detection.

Two selection strategies share one engine protocol: ``otaha`` updates only
the current best candidate's marginal gain against a persistent residual
(lazy evaluation justified by submodularity), while ``greedy_baseline``
recomputes every unselected gain each round.  ``brute_force`` enumerates
subsets by cardinality and doubles as the optimality oracle at desk scale.

An evaluator object decouples the engines from the flow machinery: it exposes
``target`` (the value meaning full control), ``node_count``,
``empty_state()``, the incremental ``add(state, node) -> (gain, new_state)``
and the from-scratch ``value(drivers) -> int``.  One ``add`` or ``value``
call is one set function evaluation: the lazy engine only ever pays for
increments, the baseline pays full recomputation each probe.  Tests inject
table-backed evaluators through the same protocol.
"""

from __future__ import annotations

import heapq
import json
import math
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from . import flow
from .controllability import controllable_dimension
from .temporal_graph import LayeredFlowGraph, TemporalNetwork, build_layered


class UncontrollableError(RuntimeError):
    """The node set cannot fully control the network (f(V) < N)."""


class FlowEvaluator:
    """Set-function evaluations backed by max-flow on the layered graph.

    ``add`` reuses the settled residual (an online increment); ``value``
    rebuilds the flow from nothing, which is what the plain greedy baseline
    is defined to pay for.
    """

    def __init__(self, net: TemporalNetwork, layered: LayeredFlowGraph | None = None):
        self.net = net
        self.graph = layered if layered is not None else build_layered(net)
        self.target = net.n
        self.node_count = net.n

    def empty_state(self) -> flow.ResidualState:
        return flow.new_state(self.graph)

    def add(self, state: flow.ResidualState, node: int):
        nxt = flow.clone_state(state)
        gain = flow.online_maxflow(nxt, node)
        return gain, nxt

    def value(self, drivers) -> int:
        return flow.evaluate_drivers(self.graph, drivers).flow


@dataclass
class DriverSelection:
    """Ordered driver nodes with per-step gains and evaluation accounting."""

    algorithm: str
    drivers: list[int]
    gains: list[int]
    f_trace: list[int]
    evaluations: int
    elapsed_ms: float
    stale_picks: list[bool] = field(default_factory=list)
    seed_size: int = 0

    @property
    def size(self) -> int:
        return len(self.drivers)

    @property
    def final_value(self) -> int:
        return self.f_trace[-1] if self.f_trace else 0

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "drivers": list(self.drivers),
            "gains": list(self.gains),
            "f_trace": list(self.f_trace),
            "evaluations": self.evaluations,
            "elapsed_ms": self.elapsed_ms,
            "stale_picks": list(self.stale_picks),
            "seed_size": self.seed_size,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _peek_rest_max(heap, gain_of, chosen_set, exclude):
    """Largest current gain among candidates other than ``exclude``.

    Entries whose recorded gain no longer matches ``gain_of`` are garbage from
    earlier updates and are dropped on sight.
    """
    shelved = []
    best = None
    while heap:
        negg, u = heap[0]
        if u in chosen_set or -negg != gain_of[u]:
            heapq.heappop(heap)
            continue
        if u == exclude:
            shelved.append(heapq.heappop(heap))
            continue
        best = -negg
        break
    for item in shelved:
        heapq.heappush(heap, item)
    return best


def otaha_on(evaluator, seed: Sequence[int] = (), strict: bool = False) -> DriverSelection:
    """Lazy-greedy selection with per-candidate residual reuse.

    Each round pops the best-known candidate, refreshes its gain against the
    current residual and selects it if the refreshed gain still beats every
    other recorded gain.  A candidate popped twice within one round was
    already refreshed this round and is selected outright; ``strict=True``
    re-evaluates even then.  Ties never select early: the refreshed candidate
    is re-inserted so the final pop resolves equal gains by lowest node id,
    which keeps the selection sequence identical to the plain greedy scan.
    """
    t_begin = time.perf_counter()
    target = evaluator.target
    n = evaluator.node_count
    evals = 0
    state = evaluator.empty_state()
    chosen: list[int] = []
    chosen_set: set[int] = set()
    gains: list[int] = []
    f_trace: list[int] = []
    stale_picks: list[bool] = []
    value = 0

    def record(node, gain, stale):
        nonlocal value
        chosen.append(node)
        chosen_set.add(node)
        gains.append(gain)
        value += gain
        f_trace.append(value)
        stale_picks.append(stale)

    def finish():
        return DriverSelection(
            algorithm="otaha",
            drivers=chosen,
            gains=gains,
            f_trace=f_trace,
            evaluations=evals,
            elapsed_ms=(time.perf_counter() - t_begin) * 1000.0,
            stale_picks=stale_picks,
            seed_size=len(seed),
        )

    for v in seed:
        if v in chosen_set:
            raise ValueError(f"duplicate seed node {v}")
        gain, state = evaluator.add(state, v)
        evals += 1
        record(v, gain, False)
        if value == target:
            return finish()

    # initialization sweep: every candidate evaluated against the seed state
    gain_of: dict[int, int] = {}
    state_of: dict[int, object] = {}
    heap: list[tuple[int, int]] = []
    for v in range(n):
        if v in chosen_set:
            continue
        gain, st = evaluator.add(state, v)
        evals += 1
        gain_of[v] = gain
        state_of[v] = st
        heap.append((-gain, v))
    heapq.heapify(heap)
    if not heap:
        raise UncontrollableError("uncontrollable instance")

    # first pick needs no refresh: every gain is current
    _, v = heapq.heappop(heap)
    if gain_of[v] == 0:
        raise UncontrollableError("uncontrollable instance")
    record(v, gain_of[v], False)
    state = state_of[v]
    if value == target:
        return finish()

    while True:
        refreshed: set[int] = set()
        picked = None
        picked_stale = False
        while True:
            if not heap:
                raise UncontrollableError("uncontrollable instance")
            negg, v = heapq.heappop(heap)
            if v in chosen_set or -negg != gain_of[v]:
                continue
            if v in refreshed:
                # re-pick within the same round: gain already current
                if strict:
                    gain, st = evaluator.add(state, v)
                    evals += 1
                    gain_of[v] = gain
                    state_of[v] = st
                picked, picked_stale = v, True
                break
            gain, st = evaluator.add(state, v)
            evals += 1
            gain_of[v] = gain
            state_of[v] = st
            refreshed.add(v)
            rest = _peek_rest_max(heap, gain_of, chosen_set, v)
            if rest is None or gain > rest:
                picked = v
                break
            heapq.heappush(heap, (-gain, v))
        if gain_of[picked] == 0:
            raise UncontrollableError("uncontrollable instance")
        record(picked, gain_of[picked], picked_stale)
        state = state_of[picked]
        if value == target:
            return finish()


def greedy_on(evaluator) -> DriverSelection:
    """Plain greedy: every unselected gain is recomputed from scratch each round."""
    t_begin = time.perf_counter()
    target = evaluator.target
    n = evaluator.node_count
    evals = 0
    chosen: list[int] = []
    chosen_set: set[int] = set()
    gains: list[int] = []
    f_trace: list[int] = []
    value = 0
    while value < target:
        best_v = best_gain = None
        for v in range(n):
            if v in chosen_set:
                continue
            gain = evaluator.value(chosen + [v]) - value
            evals += 1
            if best_gain is None or gain > best_gain:
                best_v, best_gain = v, gain
        if best_gain is None or best_gain == 0:
            raise UncontrollableError("uncontrollable instance")
        chosen.append(best_v)
        chosen_set.add(best_v)
        gains.append(best_gain)
        value += best_gain
        f_trace.append(value)
    return DriverSelection(
        algorithm="greedy",
        drivers=chosen,
        gains=gains,
        f_trace=f_trace,
        evaluations=evals,
        elapsed_ms=(time.perf_counter() - t_begin) * 1000.0,
        stale_picks=[False] * len(chosen),
    )


def otaha(net: TemporalNetwork, seed: Sequence[int] = (), strict: bool = False,
          layered: LayeredFlowGraph | None = None) -> DriverSelection:
    """Detect a driver set for ``net`` via lazy-greedy selection."""
    return otaha_on(FlowEvaluator(net, layered), seed=seed, strict=strict)


def greedy_baseline(net: TemporalNetwork,
                    layered: LayeredFlowGraph | None = None) -> DriverSelection:
    """Detect a driver set for ``net`` via the plain greedy scan."""
    return greedy_on(FlowEvaluator(net, layered))


@dataclass
class BruteForceResult:
    minimum_size: int
    sets: list[tuple[int, ...]]
    evaluations: int

    @property
    def count(self) -> int:
        return len(self.sets)


def brute_force(net: TemporalNetwork, max_size: int | None = None,
                allow_large: bool = False, node_guard: int = 24) -> BruteForceResult:
    """Exact minimum driver count and every optimal set, by enumeration.

    Subsets are tried in increasing cardinality; the first cardinality that
    fully controls the network is returned together with all witnesses of
    that size.  The combination tree shares residual prefixes (each subset
    costs one online increment, not a rebuild) and branches whose value plus
    the best remaining singleton gains cannot reach full control are cut,
    which is safe because marginal gains never exceed singleton values.
    Refuses ``n > node_guard`` unless ``allow_large=True``.
    """
    if net.n > node_guard and not allow_large:
        raise ValueError(
            f"brute force refused for n={net.n} > {node_guard}; pass allow_large=True to override"
        )
    graph = build_layered(net)
    n, target = net.n, net.n
    evals = 0
    empty = flow.new_state(graph)
    singles: list[flow.ResidualState] = []
    for v in range(n):
        st = flow.clone_state(empty)
        flow.online_maxflow(st, v)
        evals += 1
        singles.append(st)
    single_value = [st.flow for st in singles]
    # best_tail[v][r] = sum of the r largest singleton values among v..n-1
    suffix_sorted = [sorted((single_value[u] for u in range(v, n)), reverse=True)
                     for v in range(n + 1)]

    def tail_bound(v: int, slots: int) -> int:
        return sum(suffix_sorted[v][:slots])

    top = n if max_size is None else min(max_size, n)
    for k in range(1, top + 1):
        winners: list[tuple[int, ...]] = []

        def extend(prefix: tuple[int, ...], state: flow.ResidualState, nxt: int):
            nonlocal evals
            slots = k - len(prefix)
            if slots == 0:
                if state.flow == target:
                    winners.append(prefix)
                return
            for v in range(nxt, n - slots + 1):
                if state.flow + tail_bound(v, slots) < target:
                    # shrinking the candidate pool can only lower the bound
                    break
                if len(prefix) == 0:
                    child = flow.clone_state(singles[v])
                else:
                    child = flow.clone_state(state)
                    flow.online_maxflow(child, v)
                    evals += 1
                extend(prefix + (v,), child, v + 1)

        extend((), empty, 0)
        if winners:
            return BruteForceResult(minimum_size=k, sets=winners, evaluations=evals)
    raise UncontrollableError(
        "no fully controllable driver set within the requested size bound"
    )


def check_bound(selection: DriverSelection, n_d: int) -> bool:
    """Whether the selection length obeys len <= (1 + ln f(D1)) * N_D."""
    if not selection.f_trace:
        return True
    f1 = selection.f_trace[0]
    if f1 <= 0:
        return False
    return len(selection.drivers) <= (1.0 + math.log(f1)) * n_d


def _degree_order(net: TemporalNetwork) -> list[int]:
    deg = [0] * net.n
    for snap in net.snapshots:
        for (i, j) in snap:
            deg[i] += 1
            deg[j] += 1
    return sorted(range(net.n), key=lambda v: (-deg[v], v))


def multi_solutions(net: TemporalNetwork, count: int, strategy: str = "random",
                    rng_seed: int = 0) -> list[DriverSelection]:
    """Alternative driver sets from single-node seedings of the selection.

    The unseeded run comes first; further runs pre-select one node each,
    drawn at random or in descending total-degree order.  Identical final
    sets are deduplicated and every returned set is re-verified to fully
    control the network.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if strategy not in ("random", "degree"):
        raise ValueError(f"unknown seeding strategy {strategy!r}")
    layered = build_layered(net)
    solutions = [otaha(net, layered=layered)]
    seen = {frozenset(solutions[0].drivers)}
    if strategy == "degree":
        pool = _degree_order(net)
    else:
        pool = list(range(net.n))
        random.Random(rng_seed).shuffle(pool)
    for v in pool:
        if len(solutions) >= count:
            break
        sel = otaha(net, seed=[v], layered=layered)
        key = frozenset(sel.drivers)
        if key in seen:
            continue
        if controllable_dimension(net, sel.drivers, layered) != net.n:
            raise AssertionError("seeded selection failed full-control verification")
        seen.add(key)
        solutions.append(sel)
    return solutions
