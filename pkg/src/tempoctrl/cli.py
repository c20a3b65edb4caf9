"""Command-line front end: ingestion, detection, analysis, generation, benchmarks.

Every command is deterministic given explicit seeds and embeds its resolved
configuration in the machine-readable output.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time
from pathlib import Path

from . import __version__, edge_analysis, flow
from .controllability import controllable_dimension
from .detect import brute_force, greedy_baseline, multi_solutions, otaha
from .generate import GeneratorSpec, generate
from .temporal_graph import (
    EdgeListParseError,
    TemporalNetwork,
    build_layered,
    parse_temporal_edgelist,
)


def _load_network(args) -> TemporalNetwork:
    path = Path(args.input)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        return TemporalNetwork.from_json(text)
    resolution = args.resolution
    directed = True
    self_loops = args.self_loops
    if args.descriptor:
        desc = json.loads(Path(args.descriptor).read_text())
        resolution = desc.get("resolution", resolution)
        directed = desc.get("directed", directed)
        if args.self_loops is None:
            self_loops = desc.get("self_loops", True)
    if self_loops is None:
        self_loops = True
    return parse_temporal_edgelist(
        io.StringIO(text), resolution, directed=directed, self_loops=self_loops
    )


def _config_dict(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write_output(args, doc: dict, default_name: str) -> Path | None:
    if not args.out:
        return None
    out = Path(args.out)
    if out.suffix:
        out.parent.mkdir(parents=True, exist_ok=True)
        target = out
    else:
        out.mkdir(parents=True, exist_ok=True)
        target = out / default_name
    target.write_text(json.dumps(doc, indent=2))
    return target


def _parse_drivers(net: TemporalNetwork, spec: str) -> list[int]:
    if spec == "all":
        return list(range(net.n))
    label_index = {net.label_of(i): i for i in range(net.n)}
    out = []
    for token in spec.split(","):
        token = token.strip()
        if token in label_index:
            out.append(label_index[token])
        elif token.isdigit() and int(token) < net.n:
            out.append(int(token))
        else:
            raise ValueError(f"unknown driver node {token!r}")
    return out


def cmd_detect(args) -> int:
    net = _load_network(args)
    results = []
    algorithms = [args.algorithm] if args.algorithm != "all" else ["otaha", "greedy"]
    for name in algorithms:
        if name == "otaha" and args.solutions > 1:
            for sel in multi_solutions(net, count=args.solutions,
                                       strategy=args.seeding, rng_seed=args.seed):
                results.append(sel.to_dict())
                print(f"{name}, {sel.size}, {sel.final_value}, {sel.evaluations}, "
                      f"{sel.elapsed_ms:.3f}")
            continue
        if name == "otaha":
            sel = otaha(net, strict=args.strict)
        elif name == "greedy":
            sel = greedy_baseline(net)
        else:
            continue
        results.append(sel.to_dict())
        print(f"{name}, {sel.size}, {sel.final_value}, {sel.evaluations}, {sel.elapsed_ms:.3f}")
    doc = {"config": _config_dict(args), "results": results}
    if args.algorithm in ("brute", "all") or args.brute_force:
        t0 = time.perf_counter()
        bf = brute_force(net, allow_large=args.force_brute)
        elapsed = (time.perf_counter() - t0) * 1000.0
        doc["brute_force"] = {
            "minimum_size": bf.minimum_size,
            "num_sets": bf.count,
            "sets": [list(s) for s in bf.sets],
            "evaluations": bf.evaluations,
            "elapsed_ms": elapsed,
        }
        print(f"brute, {bf.minimum_size}, {net.n}, {bf.evaluations}, {elapsed:.3f}")
        for res in results:
            res["bound_ok"] = len(res["drivers"]) <= bf.minimum_size * (
                1.0 + math.log(max(res["f_trace"][0], 1))
            )
    target = _write_output(args, doc, "detect.json")
    if target:
        print(f"wrote {target}")
    return 0


def cmd_dimension(args) -> int:
    net = _load_network(args)
    drivers = _parse_drivers(net, args.drivers)
    dim = controllable_dimension(net, drivers)
    print(dim)
    _write_output(args, {"config": _config_dict(args), "dimension": dim, "n": net.n}, "dimension.json")
    return 0


def cmd_classify(args) -> int:
    net = _load_network(args)
    result = edge_analysis.classify_edges(net, exact_threshold=args.exact_threshold)
    counts = {role.value: 0 for role in edge_analysis.EdgeRole}
    for role in result.roles.values():
        counts[role.value] += 1
    rows = sorted(result.roles.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1]))
    print(", ".join(f"{k}={v}" for k, v in counts.items()))
    if args.format == "csv":
        lines = ["i,j,t,role"]
        lines += [f"{i},{j},{t},{role.value}" for (i, j, t), role in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            out = Path(args.out)
            target = out if out.suffix else out.joinpath("classify.csv")
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text)
            print(f"wrote {target}")
        else:
            sys.stdout.write(text)
        return 0
    doc = {
        "config": _config_dict(args),
        "provenance": result.provenance,
        "reference_minimum": result.reference_minimum,
        "reference_drivers": list(result.reference_drivers),
        "counts": counts,
        "roles": [{"i": i, "j": j, "t": t, "role": role.value} for (i, j, t), role in rows],
    }
    target = _write_output(args, doc, "classify.json")
    if target:
        print(f"wrote {target}")
    return 0


def cmd_betweenness(args) -> int:
    net = _load_network(args)
    scores = edge_analysis.edge_betweenness(net)
    rows = sorted(scores.items(), key=lambda kv: (kv[0][2], kv[0][0], kv[0][1]))
    if args.format == "csv":
        lines = ["i,j,t,score"]
        lines += [f"{i},{j},{t},{s:.6f}" for (i, j, t), s in rows]
        text = "\n".join(lines) + "\n"
        if args.out:
            out = Path(args.out)
            target = out if out.suffix else out.joinpath("betweenness.csv")
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text)
            print(f"wrote {target}")
        else:
            sys.stdout.write(text)
    else:
        doc = {
            "config": _config_dict(args),
            "scores": [{"i": i, "j": j, "t": t, "score": s} for (i, j, t), s in rows],
        }
        target = _write_output(args, doc, "betweenness.json")
        if target:
            print(f"wrote {target}")
        else:
            print(json.dumps(doc))
    return 0


def cmd_attack(args) -> int:
    net = _load_network(args)
    if args.drivers:
        driver_sets = [_parse_drivers(net, d) for d in args.drivers.split(";")]
    else:
        driver_sets = [otaha(net).drivers]
    strategy = {"asc": "ascending", "desc": "descending"}.get(args.strategy, args.strategy)
    traces = edge_analysis.attack_simulation(
        net,
        driver_sets,
        strategy,
        step_fraction=args.step_fraction,
        trials=args.trials,
        rng_seed=args.seed,
    )
    if args.format == "csv":
        buf = io.StringIO()
        edge_analysis.traces_to_csv(traces, buf)
        if args.out:
            out = Path(args.out)
            target = out if out.suffix else out.joinpath("attack.csv")
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(buf.getvalue())
            print(f"wrote {target}")
        else:
            sys.stdout.write(buf.getvalue())
    else:
        doc = {
            "config": _config_dict(args),
            "traces": [
                {
                    "strategy": tr.strategy,
                    "driver_set_id": tr.driver_set_id,
                    "drivers": list(tr.drivers),
                    "trials": tr.trials,
                    "points": [
                        {
                            "fraction": tr.fractions[k],
                            "dimension": tr.dimensions[k],
                            "std": tr.stds[k] if tr.stds else 0.0,
                        }
                        for k in range(len(tr.fractions))
                    ],
                }
                for tr in traces
            ],
        }
        target = _write_output(args, doc, "attack.json")
        if target:
            print(f"wrote {target}")
        else:
            print(json.dumps(doc))
    return 0


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        model=args.model,
        n=args.n,
        snapshots=args.t,
        p=args.p,
        mean_degree=args.mean_degree,
        exponent=args.exponent,
        seed=args.seed,
        self_loops=True if args.self_loops is None else args.self_loops,
    )
    net = generate(spec)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{args.model}_n{args.n}_t{args.t}_seed{args.seed}"
    (out / f"{stem}.json").write_text(net.to_json())
    lines = [f"# model={args.model} n={args.n} t={args.t} seed={args.seed}"]
    lines += [f"{i} {j} {t}" for (i, j, t) in net.temporal_edges()]
    (out / f"{stem}.edges").write_text("\n".join(lines) + "\n")
    print(f"wrote {out / (stem + '.json')} and {out / (stem + '.edges')}")
    return 0


def cmd_bench(args) -> int:
    rows = []
    for k in range(args.instances):
        spec = GeneratorSpec(
            model="er", n=args.n, snapshots=args.t, p=args.p, seed=args.seed + k
        )
        net = generate(spec)
        layered = build_layered(net)
        flow.evaluate_drivers(layered, range(min(net.n, 2)))  # warm the kernels
        t0 = time.perf_counter()
        sel_fast = otaha(net, layered=layered)
        fast_s = time.perf_counter() - t0
        t0 = time.perf_counter()
        sel_slow = greedy_baseline(net, layered=layered)
        slow_s = time.perf_counter() - t0
        rows.append({
            "instance": k,
            "otaha_size": sel_fast.size,
            "greedy_size": sel_slow.size,
            "otaha_evaluations": sel_fast.evaluations,
            "greedy_evaluations": sel_slow.evaluations,
            "otaha_seconds": fast_s,
            "greedy_seconds": slow_s,
            "time_ratio": slow_s / fast_s if fast_s > 0 else float("inf"),
        })
        print(
            f"instance {k}: otaha {sel_fast.size} drivers in {fast_s:.3f}s, "
            f"greedy {sel_slow.size} drivers in {slow_s:.3f}s, ratio {rows[-1]['time_ratio']:.1f}x"
        )
    doc = {"config": _config_dict(args), "results": rows}
    target = _write_output(args, doc, "bench.json")
    if target:
        print(f"wrote {target}")
    return 0


def _add_input_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="edge list text or canonical network JSON")
    p.add_argument("--resolution", type=float, default=1.0, help="time-bin width for edge lists")
    p.add_argument("--descriptor", default=None, help="optional JSON descriptor for the edge list")
    p.add_argument("--self-loops", action=argparse.BooleanOptionalAction, default=None,
                   help="state retention between layers (default: on)")


def _add_out_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output file or directory")
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempoctrl",
        description="Driver-node detection and controllability analysis of temporal networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="select driver nodes")
    _add_input_opts(p)
    _add_out_opts(p)
    p.add_argument("--algorithm", choices=["otaha", "greedy", "brute", "all"], default="otaha")
    p.add_argument("--brute-force", action="store_true", help="also run brute force for comparison")
    p.add_argument("--force-brute", action="store_true", help="lift the brute-force size guard")
    p.add_argument("--strict", action="store_true", help="re-evaluate instead of trusting re-picked gains")
    p.add_argument("--solutions", type=int, default=1,
                   help="return up to this many distinct driver sets via seeded reruns")
    p.add_argument("--seeding", choices=["random", "degree"], default="random",
                   help="how seed nodes are drawn when --solutions > 1")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("dimension", help="controllable dimension of a driver set")
    _add_input_opts(p)
    _add_out_opts(p)
    p.add_argument("--drivers", required=True, help="'all' or comma-separated labels/indices")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("classify", help="critical/ordinary/redundant edge roles")
    _add_input_opts(p)
    _add_out_opts(p)
    p.add_argument("--exact-threshold", type=int, default=12)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("betweenness", help="layered-graph edge betweenness")
    _add_input_opts(p)
    _add_out_opts(p)
    p.set_defaults(func=cmd_betweenness)

    p = sub.add_parser("attack", help="edge-removal robustness traces")
    _add_input_opts(p)
    _add_out_opts(p)
    p.add_argument("--strategy", choices=["random", "asc", "desc", "ascending", "descending"],
                   required=True)
    p.add_argument("--trials", type=int, default=100, help="permutations for the random strategy")
    p.add_argument("--step-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--drivers", default=None,
                   help="semicolon-separated driver sets (each 'all' or comma list); default: detected set")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("generate", help="synthetic temporal networks")
    p.add_argument("--model", choices=["er", "scale_free"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True, help="number of snapshots")
    p.add_argument("--p", type=float, default=0.0, help="ER edge probability")
    p.add_argument("--mean-degree", type=float, default=0.0, help="scale-free <k>")
    p.add_argument("--exponent", type=float, default=0.5, help="scale-free weight exponent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--self-loops", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="compare selection algorithms on generated instances")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--t", type=int, default=20)
    p.add_argument("--p", type=float, default=0.02)
    p.add_argument("--instances", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    _add_out_opts(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EdgeListParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
