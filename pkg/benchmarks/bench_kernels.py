#!/usr/bin/env python3
"""Benchmark the JIT kernels against the pure-Python fallback.

Times the augmenting-path engine and the betweenness kernel on generated
instances under both backends, then a full driver-node selection.  Run:

    python benchmarks/bench_kernels.py [--n 120] [--t 15] [--p 0.02] [--repeat 3]
"""

import argparse
import time

from tempoctrl import _kernels, flow
from tempoctrl.detect import otaha
from tempoctrl.edge_analysis import edge_betweenness
from tempoctrl.generate import GeneratorSpec, er_temporal
from tempoctrl.temporal_graph import build_layered


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=120)
    ap.add_argument("--t", type=int, default=15)
    ap.add_argument("--p", type=float, default=0.02)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    net = er_temporal(GeneratorSpec(model="er", n=args.n, snapshots=args.t,
                                    p=args.p, seed=args.seed))
    graph = build_layered(net)
    drivers = list(range(0, args.n, max(1, args.n // 10)))

    rows = []
    for backend in ("numba", "python"):
        try:
            _kernels.set_backend(backend)
        except RuntimeError:
            print(f"{backend}: unavailable, skipping")
            continue
        flow.evaluate_drivers(graph, drivers[:2])  # warm (JIT compile / caches)
        t_flow = best_of(args.repeat, lambda: flow.evaluate_drivers(graph, drivers))
        t_betw = best_of(args.repeat, lambda: edge_betweenness(net))
        t_detect = best_of(1, lambda: otaha(net, layered=graph))
        rows.append((backend, t_flow, t_betw, t_detect))
        print(f"{backend:>7}: max-flow {t_flow * 1e3:8.2f} ms   "
              f"betweenness {t_betw * 1e3:8.2f} ms   selection {t_detect:8.3f} s")

    if len(rows) == 2:
        _, f1, b1, d1 = rows[0]
        _, f2, b2, d2 = rows[1]
        print(f"speedup: max-flow {f2 / f1:.1f}x   betweenness {b2 / b1:.1f}x   "
              f"selection {d2 / d1:.1f}x")


if __name__ == "__main__":
    main()
