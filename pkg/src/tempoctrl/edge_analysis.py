"""Edge roles, layered-graph edge betweenness, and edge-attack simulation.

Edges are classified by what their removal does to the minimum driver count:
critical (count increases), ordinary (same count, different set needed) or
redundant (the reference set still works).  Betweenness is computed on the
unsplit time-layered graph; state-preserving edges carry no score and are
never attack targets.
"""

from __future__ import annotations

import csv
import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels, flow
from .controllability import controllable_dimension
from .detect import brute_force, otaha
from .runtime import thread_cap
from .temporal_graph import TemporalNetwork, build_layered


class EdgeRole(enum.Enum):
    CRITICAL = "critical"
    ORDINARY = "ordinary"
    REDUNDANT = "redundant"


@dataclass
class EdgeClassification:
    roles: dict[tuple[int, int, int], EdgeRole]
    provenance: str  # "exact" | "approximate"
    reference_drivers: tuple[int, ...]
    reference_minimum: int

    def fraction(self, role: EdgeRole) -> float:
        if not self.roles:
            return 0.0
        hits = sum(1 for r in self.roles.values() if r is role)
        return hits / len(self.roles)


def _minimum_driver_count(net: TemporalNetwork, exact: bool) -> tuple[int, tuple[int, ...]]:
    if exact:
        res = brute_force(net, allow_large=True)
        return res.minimum_size, res.sets[0]
    sel = otaha(net)
    return sel.size, tuple(sel.drivers)


def classify_edges(net: TemporalNetwork, exact_threshold: int = 12) -> EdgeClassification:
    """Classify every non-self temporal edge by its removal effect.

    Below ``exact_threshold`` nodes the reference minimum comes from brute
    force (provenance "exact"); above it from the lazy-greedy selection,
    which only upper-bounds the minimum, so the critical/ordinary boundary is
    marked "approximate".  The input network is never mutated.
    """
    exact = net.n <= exact_threshold
    n_d, ref = _minimum_driver_count(net, exact)
    roles: dict[tuple[int, int, int], EdgeRole] = {}
    for (i, j, t) in net.temporal_edges():
        if i == j:
            continue
        pruned = net.without_edge(i, j, t)
        if controllable_dimension(pruned, ref) == net.n:
            roles[(i, j, t)] = EdgeRole.REDUNDANT
            continue
        nd_pruned, _ = _minimum_driver_count(pruned, exact)
        roles[(i, j, t)] = EdgeRole.ORDINARY if nd_pruned == n_d else EdgeRole.CRITICAL
    return EdgeClassification(
        roles=roles,
        provenance="exact" if exact else "approximate",
        reference_drivers=tuple(ref),
        reference_minimum=n_d,
    )


def edge_betweenness(net: TemporalNetwork) -> dict[tuple[int, int, int], float]:
    """All-pairs shortest-path betweenness of each non-self temporal edge.

    Computed over the unsplit layered graph (one node per (node, layer) pair,
    one layered edge per temporal edge) with unit edge lengths and fractional
    credit across equally short paths.  State-preserving edges (retention
    hops and explicit self-edges) are traversable, because signals can wait
    at a node, but they receive no score and are never attack targets.
    """
    n, dt, t0 = net.n, net.dt, net.t0
    triples = [(i, j, t) for (i, j, t) in net.temporal_edges() if i != j]
    n_nodes = n * (dt + 1)
    if not triples:
        return {}
    src = [(t - t0) * n + i for (i, j, t) in triples]
    dst = [(t - t0 + 1) * n + j for (i, j, t) in triples]
    keep: set[tuple[int, int]] = set()
    if net.self_loops:
        keep.update((t * n + i, (t + 1) * n + i) for t in range(dt) for i in range(n))
    else:
        keep.update(
            ((t - t0) * n + i, (t - t0 + 1) * n + i)
            for (i, j, t) in net.temporal_edges()
            if i == j
        )
    src += [u for (u, v) in keep]
    dst += [v for (u, v) in keep]
    src_arr = np.asarray(src, np.int64)
    dst_arr = np.asarray(dst, np.int32)
    order = np.argsort(src_arr, kind="stable")
    indptr = np.zeros(n_nodes + 1, np.int64)
    np.add.at(indptr, src_arr + 1, 1)
    np.cumsum(indptr, out=indptr)
    eto = dst_arr[order]
    scores = _kernels.edge_betweenness_scores(indptr, eto)
    out: dict[tuple[int, int, int], float] = {}
    for slot, original in enumerate(order):
        if original < len(triples):
            out[triples[original]] = float(scores[slot])
    return out


@dataclass
class AttackTrace:
    strategy: str
    driver_set_id: int
    drivers: tuple[int, ...]
    fractions: list[float]
    dimensions: list[float]
    stds: list[float] = field(default_factory=list)
    trials: int = 1

    def area(self) -> float:
        """Trapezoidal area under the dimension-vs-fraction curve."""
        return float(np.trapezoid(self.dimensions, self.fractions))


def _attack_order(strategy: str,
                  scores: dict[tuple[int, int, int], float]) -> list[tuple[int, int, int]]:
    # stable (t, i, j) order breaks betweenness ties reproducibly
    edges = sorted(scores.keys(), key=lambda e: (e[2], e[0], e[1]))
    if strategy == "ascending":
        return sorted(edges, key=lambda e: scores[e])
    if strategy == "descending":
        return sorted(edges, key=lambda e: -scores[e])
    raise ValueError(f"unknown strategy {strategy!r}")


def _trace_dimensions(net: TemporalNetwork, order: Sequence[tuple[int, int, int]],
                      driver_sets: Sequence[Sequence[int]],
                      fractions: Sequence[float]) -> list[list[int]]:
    # one list of dimensions per driver set, aligned with fractions
    dims: list[list[int]] = [[] for _ in driver_sets]
    for frac in fractions:
        k = int(frac * len(order))
        pruned = net.without_edges(order[:k])
        layered = build_layered(pruned)
        for idx, drivers in enumerate(driver_sets):
            dims[idx].append(flow.evaluate_drivers(layered, drivers).flow)
    return dims


def attack_simulation(net: TemporalNetwork, driver_sets: Sequence[Sequence[int]],
                      strategy: str, step_fraction: float = 0.1, trials: int = 100,
                      rng_seed: int = 0,
                      scores: dict[tuple[int, int, int], float] | None = None,
                      recompute_scores: bool = False) -> list[AttackTrace]:
    """Cumulative edge removal under one strategy, tracking f per driver set.

    Betweenness is computed once on the intact network and the removal order
    is fixed (``recompute_scores=True`` re-ranks the surviving edges after
    every step instead).  The random strategy averages ``trials`` independent
    removal orders.  Self-retention edges are never removed.
    """
    if not (0.0 < step_fraction <= 1.0):
        raise ValueError("step_fraction must lie in (0, 1]")
    if strategy not in ("random", "ascending", "descending"):
        raise ValueError(f"unknown strategy {strategy!r}")
    for drivers in driver_sets:
        if controllable_dimension(net, drivers) != net.n:
            raise ValueError(f"driver set {sorted(drivers)} does not fully control the network")

    n_steps = int(np.ceil(1.0 / step_fraction))
    fractions = [min(1.0, k * step_fraction) for k in range(n_steps + 1)]

    if strategy == "random":
        attackable = sorted(
            ((i, j, t) for (i, j, t) in net.temporal_edges() if i != j),
            key=lambda e: (e[2], e[0], e[1]),
        )
        rng = random.Random(rng_seed)
        orders = []
        for _ in range(trials):
            order = attackable[:]
            rng.shuffle(order)
            orders.append(order)
        acc = np.zeros((len(driver_sets), len(fractions)))
        acc2 = np.zeros_like(acc)
        workers = thread_cap()
        if workers > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = pool.map(
                    lambda order: _trace_dimensions(net, order, driver_sets, fractions), orders
                )
                all_dims = list(results)
        else:
            all_dims = [_trace_dimensions(net, order, driver_sets, fractions) for order in orders]
        for trial_dims in all_dims:
            dims = np.array(trial_dims, float)
            acc += dims
            acc2 += dims * dims
        mean = acc / trials
        var = np.maximum(acc2 / trials - mean * mean, 0.0)
        return [
            AttackTrace(
                strategy=strategy,
                driver_set_id=idx,
                drivers=tuple(sorted(drivers)),
                fractions=fractions,
                dimensions=list(mean[idx]),
                stds=list(np.sqrt(var[idx])),
                trials=trials,
            )
            for idx, drivers in enumerate(driver_sets)
        ]

    if scores is None:
        scores = edge_betweenness(net)
    if recompute_scores:
        dims: list[list[int]] = [[] for _ in driver_sets]
        pruned = net
        removed = 0
        total = len(scores)
        for frac in fractions:
            want = int(frac * total)
            while removed < want:
                remaining = edge_betweenness(pruned)
                if not remaining:
                    break
                order = _attack_order(strategy, remaining)
                pruned = pruned.without_edge(*order[0])
                removed += 1
            layered = build_layered(pruned)
            for idx, drivers in enumerate(driver_sets):
                dims[idx].append(flow.evaluate_drivers(layered, drivers).flow)
    else:
        order = _attack_order(strategy, scores)
        dims = _trace_dimensions(net, order, driver_sets, fractions)
    return [
        AttackTrace(
            strategy=strategy,
            driver_set_id=idx,
            drivers=tuple(sorted(drivers)),
            fractions=fractions,
            dimensions=[float(d) for d in dims[idx]],
            trials=1,
        )
        for idx, drivers in enumerate(driver_sets)
    ]


def traces_to_csv(traces: Iterable[AttackTrace], stream) -> None:
    """Write traces as CSV: strategy, driver_set_id, fraction, dimension, trial_mean, trial_std."""
    writer = csv.writer(stream)
    writer.writerow(["strategy", "driver_set_id", "fraction", "dimension", "trial_mean", "trial_std"])
    for tr in traces:
        for k, frac in enumerate(tr.fractions):
            dim = tr.dimensions[k]
            std = tr.stds[k] if tr.stds else 0.0
            writer.writerow([
                tr.strategy,
                tr.driver_set_id,
                f"{frac:.6f}",
                f"{dim:.6f}",
                f"{dim:.6f}",
                f"{std:.6f}",
            ])
