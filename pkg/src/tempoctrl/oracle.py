"""Desk-scale numeric oracle: rank of the time-varying controllability matrix.

A random weighted realisation of the snapshot structure is assembled and the
rank of C(t0, t1) = [Phi(t1, t0+1) B, ..., Phi(t1, t1-1) B, B] is computed
with dense linear algebra.  For generic weights this rank equals the
structural controllable dimension, which makes it an independent check on
the max-flow machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .temporal_graph import TemporalNetwork

_GUARD_N = 30
_GUARD_DT = 30
_RANK_RTOL = 1e-9


@dataclass(frozen=True)
class NumericRealization:
    """Weighted matrices realising the snapshot structure plus an input matrix.

    ``a_mats[k]`` realises the transition of snapshot k: entry (j, i) is
    nonzero exactly when the snapshot holds edge (i, j), with retention
    weights on the diagonal when the network keeps state.  ``b_mat`` has one
    unit column per driver.
    """

    a_mats: tuple[np.ndarray, ...]
    b_mat: np.ndarray
    n: int
    drivers: tuple[int, ...]


def realize(net: TemporalNetwork, drivers, rng: np.random.Generator) -> NumericRealization:
    """Draw weights i.i.d. uniform on [0.5, 1.5] over the snapshot sparsity."""
    drivers = tuple(sorted(set(drivers)))
    n = net.n
    a_mats = []
    for snap in net.snapshots:
        a = np.zeros((n, n))
        if net.self_loops:
            a[np.diag_indices(n)] = rng.uniform(0.5, 1.5, size=n)
        for (i, j) in snap:
            a[j, i] = rng.uniform(0.5, 1.5)
        a_mats.append(a)
    b = np.zeros((n, len(drivers)))
    for col, v in enumerate(drivers):
        b[v, col] = 1.0
    return NumericRealization(tuple(a_mats), b, n, drivers)


def controllability_matrix(realization: NumericRealization) -> np.ndarray:
    """Stack the Phi(t1, t+1) B blocks for t = t0 .. t1-1."""
    n = realization.n
    if realization.b_mat.shape[1] == 0:
        return np.zeros((n, 0))
    blocks = []
    accum = np.eye(n)
    # iterate backwards: the final-step block is B itself
    for a in reversed(realization.a_mats):
        blocks.append(accum @ realization.b_mat)
        accum = accum @ a
    return np.hstack(blocks[::-1])


def numeric_rank(realization: NumericRealization) -> int:
    """Numeric rank of C with singular values below 1e-9 * sigma_max zeroed."""
    dt = len(realization.a_mats)
    if realization.n > _GUARD_N or dt > _GUARD_DT:
        raise ValueError(f"instance exceeds dense-oracle guard (n<={_GUARD_N}, dt<={_GUARD_DT})")
    c = controllability_matrix(realization)
    if c.size == 0:
        return 0
    sigma = np.linalg.svd(c, compute_uv=False)
    if sigma[0] == 0.0:
        return 0
    return int(np.sum(sigma > _RANK_RTOL * sigma[0]))


def rank_dimension(net: TemporalNetwork, drivers, seed: int = 0) -> int:
    """Convenience wrapper: realise with a seeded generator and take the rank."""
    rng = np.random.default_rng(seed)
    return numeric_rank(realize(net, drivers, rng))
