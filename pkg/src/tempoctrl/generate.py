"""Synthetic temporal network generators: per-snapshot ER and static-model scale-free."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .temporal_graph import TemporalNetwork


@dataclass(frozen=True)
class GeneratorSpec:
    model: str               # "er" | "scale_free"
    n: int
    snapshots: int
    p: float = 0.0           # ER edge probability
    mean_degree: float = 0.0  # scale-free <k>
    exponent: float = 0.5    # static-model weight exponent (degree exponent 3)
    seed: int = 0
    self_loops: bool = True

    def __post_init__(self):
        if self.n <= 0 or self.snapshots <= 0:
            raise ValueError("n and snapshot count must be positive")
        if self.model == "er" and not (0.0 <= self.p <= 1.0):
            raise ValueError("p must lie in [0, 1]")
        if self.model == "scale_free" and self.mean_degree < 0:
            raise ValueError("mean degree must be >= 0")


def er_temporal(spec: GeneratorSpec) -> TemporalNetwork:
    """Each snapshot independently keeps every ordered pair with probability p."""
    if spec.model != "er":
        raise ValueError("spec.model must be 'er'")
    rng = np.random.default_rng(spec.seed)
    snaps = []
    for _ in range(spec.snapshots):
        mask = rng.random((spec.n, spec.n)) < spec.p
        np.fill_diagonal(mask, False)
        src, dst = np.nonzero(mask)
        snaps.append(frozenset(zip(src.tolist(), dst.tolist())))
    return TemporalNetwork(spec.n, tuple(snaps), spec.self_loops)


def scale_free_temporal(spec: GeneratorSpec) -> TemporalNetwork:
    """Static-model snapshots: weighted pair draws until n*<k>/2 distinct pairs.

    Node i carries weight (i+1)^(-exponent); each accepted undirected pair is
    realised in a uniformly random direction, so snapshots are directed while
    degree heterogeneity follows the weight law.
    """
    if spec.model != "scale_free":
        raise ValueError("spec.model must be 'scale_free'")
    pairs_per_snap = int(round(spec.n * spec.mean_degree / 2.0))
    if pairs_per_snap > spec.n * (spec.n - 1) // 2:
        raise ValueError("mean degree too large for a simple snapshot")
    rng = np.random.default_rng(spec.seed)
    weights = (np.arange(1, spec.n + 1, dtype=float)) ** (-spec.exponent)
    weights /= weights.sum()
    snaps = []
    for _ in range(spec.snapshots):
        chosen: set[tuple[int, int]] = set()
        edges: set[tuple[int, int]] = set()
        while len(chosen) < pairs_per_snap:
            i, j = rng.choice(spec.n, size=2, p=weights)
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            if key in chosen:
                continue
            chosen.add(key)
            if rng.random() < 0.5:
                edges.add((int(i), int(j)))
            else:
                edges.add((int(j), int(i)))
        snaps.append(frozenset(edges))
    return TemporalNetwork(spec.n, tuple(snaps), spec.self_loops)


def generate(spec: GeneratorSpec) -> TemporalNetwork:
    if spec.model == "er":
        return er_temporal(spec)
    if spec.model == "scale_free":
        return scale_free_temporal(spec)
    raise ValueError(f"unknown model {spec.model!r}")
