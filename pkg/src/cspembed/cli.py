"""Command-line front end: constructions, reductions, oracles, and sweeps.

Every randomized command records its seed in the output and reproduces the
same artifact when rerun with it (wall-clock timings in reports are the one
documented exception). Exit codes: 0 success, 1 failed verification or
equivalence, 2 input error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from .compiler import pipeline
from .config import DEFAULT_CONFIG, Config, load_config
from .csp import (
    clique_instance,
    coloring_instance,
    count_satisfying,
    csp_from_json,
    csp_to_json,
    four_regular_coloring_instance,
    random_instance,
    regularize,
    solve_bruteforce,
)
from .embedding import embed
from .errors import BudgetError, InputError, VerificationError
from .expander import bipartite_expander, cheeger_exact, cheeger_spectral_bound
from .graphs import Graph
from .routing import DemandSet, route_matching

FORMAT_VERSION = 1


class _StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}': {cause}")


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, _StageError):
                raise _StageError(name, exc) from exc
            return False

    return _Ctx()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _named_graph(spec: str) -> Graph:
    """Graph from a name ('octahedron', 'k5', 'complete:<n>', 'cycle:<n>',
    'random-regular:<d>:<n>:<seed>') or a graph JSON file path."""
    if spec == "octahedron":
        edges = [
            (u, v)
            for u in range(6)
            for v in range(u + 1, 6)
            if {u, v} not in ({0, 1}, {2, 3}, {4, 5})
        ]
        return Graph.from_edges(6, edges)
    if spec == "k5":
        return Graph.from_edges(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
    if spec.startswith("complete:"):
        n = int(spec.split(":")[1])
        return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    if spec.startswith("cycle:"):
        n = int(spec.split(":")[1])
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if spec.startswith("random-regular:"):
        _, d, n, seed = spec.split(":")
        return random_regular_graph(int(d), int(n), int(seed))
    path = Path(spec)
    if not path.exists():
        raise InputError(f"unknown graph spec or missing file: {spec}")
    return Graph.from_json(path.read_text())


def random_regular_graph(d: int, n: int, seed: int, tries: int = 1000) -> Graph:
    """Seeded simple d-regular graph via the pairing model with rejection."""
    if (d * n) % 2 != 0 or d >= n:
        raise InputError(f"no {d}-regular graph on {n} vertices")
    rng = random.Random(seed)
    for _ in range(tries):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        it = iter(stubs)
        for a, b in zip(it, it):
            if a == b or (min(a, b), max(a, b)) in edges:
                ok = False
                break
            edges.add((min(a, b), max(a, b)))
        if ok:
            return Graph(n, frozenset(edges))
    raise BudgetError(f"no simple {d}-regular sample on {n} vertices in {tries} tries")


def _cert_path(out: str) -> Path:
    p = Path(out)
    return p.with_suffix(".cert.json") if p.suffix == ".json" else Path(out + ".cert.json")


def cmd_expander(args, cfg: Config) -> int:
    exp = bipartite_expander(args.n, args.seed, cfg)
    bound = exp.cheeger_lower_bound
    method = exp.method
    if args.certify == "exact" and method != "exact":
        bound = cheeger_exact(exp.graph, cfg.exact_cheeger_max_n)
        method = "exact"
    elif args.certify == "spectral" and method != "spectral":
        bound = cheeger_spectral_bound(exp.graph, cfg)
        method = "spectral"
    cert = {
        "format_version": FORMAT_VERSION,
        "cheeger_lb": float(bound),
        "method": method,
        "lambda2": exp.lambda2,
        "n": args.n,
        "seed": args.seed,
    }
    if args.out and args.out != "-":
        _write(args.out, exp.graph.to_json())
        _write(str(_cert_path(args.out)), _dump(cert))
    else:
        _write(None, exp.graph.to_json())
        _write(None, _dump(cert))
    return 0


def cmd_route(args, cfg: Config) -> int:
    with _stage("parse-host"):
        host = Graph.from_json(Path(args.host).read_text())
    cert_file = _cert_path(args.host)
    if not cert_file.exists():
        raise InputError(
            f"host certificate {cert_file} not found; routing targets need a "
            "certified expansion bound"
        )
    with _stage("parse-certificate"):
        alpha = json.loads(cert_file.read_text())["cheeger_lb"]
    with _stage("parse-demands"):
        demands = DemandSet.of(json.loads(Path(args.demands).read_text())["pairs"])
    sol = route_matching(host, demands, args.seed, cfg, alpha=alpha)
    out = {
        "format_version": FORMAT_VERSION,
        "paths": [list(p.vertices) for p in sol.paths],
        "max_edge_congestion": sol.max_edge_congestion,
        "max_path_len": sol.max_path_len,
        "met_targets": sol.met_targets,
        "seed": args.seed,
    }
    _write(args.out, _dump(out))
    return 0


def cmd_embed(args, cfg: Config) -> int:
    with _stage("parse-source"):
        src = _named_graph(args.src)
    result = embed(src, args.k, args.seed, cfg)
    emb = result.embedding
    out = {
        "format_version": FORMAT_VERSION,
        "host": json.loads(emb.host.to_json()),
        "anchor": list(emb.anchor),
        "psi": [sorted(s) for s in emb.assignment],
        "depth": result.depth_report.depth,
        "bound": result.depth_report.bound,
        "fitted_z": result.depth_report.fitted_z,
        "max_edge_congestion": max(
            (s.max_edge_congestion for s in result.routing), default=0
        ),
        "seed": args.seed,
    }
    _write(args.out, _dump(out))
    return 0


def cmd_compile(args, cfg: Config) -> int:
    with _stage("parse-gamma"):
        gamma = csp_from_json(Path(args.gamma).read_text())
    result = pipeline(gamma, args.k, args.seed, cfg)
    try:
        phi_text = csp_to_json(result.compiled.phi, cfg.materialize_budget)
    except BudgetError:
        phi_text = _dump(
            {
                "format_version": FORMAT_VERSION,
                "kind": "recipe",
                "note": "compiled relations exceed the materialization budget; "
                "rebuild deterministically from this recipe",
                "gamma": json.loads(csp_to_json(gamma, cfg.materialize_budget)),
                "k": args.k,
                "seed": args.seed,
            }
        )
    _write(args.out, phi_text)
    if args.metrics:
        _write(args.metrics, _dump({"format_version": FORMAT_VERSION, **result.metrics}))
    return 0


def _budget_arg(args, cfg: Config):
    if args.budget is None:
        return cfg.solver_budget
    return None if args.budget == 0 else args.budget


def cmd_solve(args, cfg: Config) -> int:
    with _stage("parse-csp"):
        inst = csp_from_json(Path(args.csp).read_text())
    sol = solve_bruteforce(inst, _budget_arg(args, cfg))
    _write(
        args.out,
        _dump(
            {
                "format_version": FORMAT_VERSION,
                "satisfiable": sol is not None,
                "assignment": list(sol) if sol is not None else None,
            }
        ),
    )
    return 0


def cmd_count(args, cfg: Config) -> int:
    with _stage("parse-csp"):
        inst = csp_from_json(Path(args.csp).read_text())
    c = count_satisfying(inst, _budget_arg(args, cfg))
    _write(args.out, _dump({"format_version": FORMAT_VERSION, "count": c}))
    return 0


def cmd_transport(args, cfg: Config) -> int:
    with _stage("parse-gamma"):
        gamma = csp_from_json(Path(args.gamma).read_text())
    with _stage("parse-assignment"):
        values = json.loads(Path(args.assignment).read_text())
    result = pipeline(gamma, args.k, args.seed, cfg)
    compiled = result.compiled
    if args.direction == "encode":
        out_values = compiled.encode_assignment(tuple(values))
    else:
        out_values = compiled.decode_assignment(tuple(values))
    _write(
        args.out,
        _dump(
            {
                "format_version": FORMAT_VERSION,
                "direction": args.direction,
                "values": list(out_values),
                "seed": args.seed,
            }
        ),
    )
    return 0


def cmd_e2e(args, cfg: Config) -> int:
    timings = {}
    with _stage("parse-gamma"):
        if args.gamma:
            gamma = csp_from_json(Path(args.gamma).read_text())
        else:
            g = _named_graph(args.graph)
            gamma = four_regular_coloring_instance(g, args.q)
    budget = _budget_arg(args, cfg)
    t0 = time.perf_counter()
    with _stage("pipeline"):
        result = pipeline(gamma, args.k, args.seed, cfg)
    timings["pipeline"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    with _stage("solve-gamma"):
        gamma_sol = solve_bruteforce(gamma, budget)
        gamma_count = count_satisfying(gamma, budget)
    timings["solve_gamma"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    with _stage("solve-phi"):
        phi = result.compiled.phi
        phi_sol = solve_bruteforce(phi, budget)
        phi_count = count_satisfying(phi, budget)
    timings["solve_phi"] = time.perf_counter() - t0
    sat_agree = (gamma_sol is None) == (phi_sol is None)
    counts_agree = gamma_count == phi_count
    report = {
        "format_version": FORMAT_VERSION,
        "seed": args.seed,
        "k": args.k,
        "gamma_vertices": gamma.graph.n,
        "gamma_edges": len(gamma.graph.edges),
        "host_vertices": result.metrics["host_vertices"],
        "depth": result.metrics["depth"],
        "depth_bound": result.metrics["depth_bound"],
        "fitted_z": result.metrics["fitted_z"],
        "max_edge_congestion": result.metrics["max_edge_congestion"],
        "gamma_satisfiable": gamma_sol is not None,
        "phi_satisfiable": phi_sol is not None,
        "gamma_count": gamma_count,
        "phi_count": phi_count,
        "satisfiability_agrees": sat_agree,
        "counts_agree": counts_agree,
        "timings": timings,
    }
    _write(args.out, _dump(report))
    if not (sat_agree and counts_agree):
        print("e2e equivalence FAILED", file=sys.stderr)
        return 1
    return 0


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _write_rows(path: Optional[str], header: list[str], rows: list[list], fmt: str) -> None:
    if fmt == "json":
        _write(path, _dump({"header": header, "rows": rows}))
        return
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _write(path, buf.getvalue())


def cmd_depth_sweep(args, cfg: Config) -> int:
    rows = []
    for n in _ints(args.n_list):
        for k in _ints(args.k_list):
            for seed in _ints(args.seeds):
                src = random_regular_graph(3, n, seed * 7919 + n)
                result = embed(src, k, seed, cfg)
                rep = result.depth_report
                rows.append(
                    ["run", n, k, seed, rep.depth, f"{rep.bound:.6f}", f"{rep.fitted_z:.6f}"]
                )
    rows.sort(key=lambda r: (r[1], r[2], r[3]))
    max_z = max((float(r[6]) for r in rows), default=0.0)
    rows.append(["summary", "", "", "", "", "", f"{max_z:.6f}"])
    _write_rows(args.out, ["kind", "n", "k", "seed", "depth", "bound", "fitted_z"], rows, args.format)
    return 0


def cmd_congestion_sweep(args, cfg: Config) -> int:
    rows = []
    points = []
    for k in _ints(args.k_list):
        exp = bipartite_expander(k, args.seed, cfg)
        for trial in range(args.trials):
            rng = random.Random(args.seed * 1_000_003 + k * 1009 + trial)
            perm = list(range(k))
            rng.shuffle(perm)
            pairs = [(perm[2 * i], perm[2 * i + 1]) for i in range(k // 2)]
            sol = route_matching(
                exp.graph,
                DemandSet.of(pairs),
                trial,
                cfg,
                alpha=exp.cheeger_lower_bound,
            )
            ratio = sol.max_edge_congestion / math.log2(k)
            rows.append(["run", k, trial, sol.max_edge_congestion, f"{ratio:.6f}"])
            points.append((math.log2(k), sol.max_edge_congestion))
    rows.sort(key=lambda r: (r[1], r[2]))
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(set(xs.tolist())) > 1 else 0.0
    rows.append(["summary", "", "", "", f"{slope:.6f}"])
    _write_rows(
        args.out,
        ["kind", "k", "trial", "max_edge_congestion", "ratio_log2k"],
        rows,
        args.format,
    )
    return 0


def cmd_gen(args, cfg: Config) -> int:
    if args.kind == "coloring":
        g = _named_graph(args.graph)
        inst = (
            four_regular_coloring_instance(g, args.q)
            if args.pad_4regular
            else coloring_instance(g, args.q)
        )
    elif args.kind == "clique":
        g = _named_graph(args.graph)
        inst = clique_instance(g, args.clique_k)
    elif args.kind == "random":
        inst = random_instance(
            args.n, args.edge_prob, args.alphabet, args.pair_density, args.seed
        )
    elif args.kind == "regularize":
        with _stage("parse-csp"):
            inst = csp_from_json(Path(args.csp).read_text())
        inst = regularize(inst)
    else:
        raise InputError(f"unknown generator kind {args.kind}")
    _write(args.out, csp_to_json(inst, cfg.materialize_budget))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cspembed",
        description="Expander construction, routing, connected embedding, and "
        "CSP compilation with brute-force verification oracles.",
    )
    parser.add_argument("--config", help="JSON file of config overrides")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expander", help="build a certified bipartite 3-regular expander")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--certify", choices=["exact", "spectral"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_expander)

    p = sub.add_parser("route", help="route demand pairs through a certified host")
    p.add_argument("--host", required=True)
    p.add_argument("--demands", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("embed", help="connected embedding into a k-vertex expander")
    p.add_argument("--src", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("compile", help="compile a CSP onto an expander host")
    p.add_argument("--gamma", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--metrics")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("solve", help="brute-force satisfiability with witness")
    p.add_argument("--csp", required=True)
    p.add_argument("--budget", type=int, help="assignment-space budget; 0 = unlimited")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="exact satisfying-assignment count")
    p.add_argument("--csp", required=True)
    p.add_argument("--budget", type=int, help="assignment-space budget; 0 = unlimited")
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("transport", help="move assignments across the reduction")
    p.add_argument("--direction", choices=["encode", "decode"], required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--assignment", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transport)

    p = sub.add_parser("e2e", help="generate, compile, solve both sides, compare")
    p.add_argument("--graph", help="named graph or graph JSON path")
    p.add_argument("--gamma", help="CSP JSON path (overrides --graph)")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=0, help="0 = unlimited")
    p.add_argument("--out")
    p.set_defaults(func=cmd_e2e)

    p = sub.add_parser("depth-sweep", help="embedding depth over (n, k, seed) grids")
    p.add_argument("--n-list", required=True)
    p.add_argument("--k-list", required=True)
    p.add_argument("--seeds", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_depth_sweep)

    p = sub.add_parser("congestion-sweep", help="routing congestion across host sizes")
    p.add_argument("--k-list", required=True)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_congestion_sweep)

    p = sub.add_parser("gen", help="emit generator instances as CSP JSON")
    p.add_argument("--kind", choices=["coloring", "clique", "random", "regularize"], required=True)
    p.add_argument("--graph")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--pad-4regular", action="store_true")
    p.add_argument("--clique-k", type=int, default=3)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--alphabet", type=int, default=3)
    p.add_argument("--pair-density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csp", help="input CSP (for regularize)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else DEFAULT_CONFIG
        return args.func(args, cfg)
    except _StageError as e:
        print(f"error at {e}", file=sys.stderr)
        inner = e.cause
        if isinstance(inner, BudgetError):
            return 3
        if isinstance(inner, VerificationError):
            return 1
        return 2
    except BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return 3
    except VerificationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return 1
    except (InputError, OSError, json.JSONDecodeError, KeyError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
