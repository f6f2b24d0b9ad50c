"""Congestion-bounded routing of vertex-disjoint demand pairs through an expander.

Demands are routed sequentially by Dijkstra under exponential congestion
penalties, then improved by rerouting sweeps in seeded random order until a
sweep stops helping. The reported profile is exact bookkeeping over the
emitted paths, so every guarantee is independently checkable.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .config import DEFAULT_CONFIG, Config
from .errors import InputError
from .graphs import Edge, Graph, Path, shortest_path


@dataclass(frozen=True)
class DemandSet:
    """Source/target pairs forming a partial matching: all endpoints distinct."""

    pairs: tuple[tuple[int, int], ...]

    @staticmethod
    def of(pairs) -> "DemandSet":
        return DemandSet(tuple((s, t) for s, t in pairs))

    def __post_init__(self):
        seen = set()
        for s, t in self.pairs:
            for x in (s, t):
                if x in seen:
                    raise InputError(f"demand endpoint {x} repeats; pairs must form a matching")
                seen.add(x)


def congestion_profile(paths: list[Path], g: Graph) -> tuple[dict[Edge, int], dict[int, int]]:
    """Per-edge and per-vertex path counts, recomputed from scratch."""
    edge_c: Counter = Counter()
    vertex_c: Counter = Counter()
    for p in paths:
        if not p.is_valid_in(g):
            raise InputError(f"path {p.vertices} is not a walk in the host")
        for e in p.edges():
            edge_c[e] += 1
        for v in set(p.vertices):
            vertex_c[v] += 1
    return dict(edge_c), dict(vertex_c)


@dataclass(frozen=True)
class RoutingSolution:
    host: Graph
    demands: DemandSet
    paths: tuple[Path, ...]
    edge_congestion: dict[Edge, int]
    vertex_congestion: dict[int, int]
    max_edge_congestion: int
    max_path_len: int
    met_targets: Optional[bool]  # None when no expansion certificate was given


def _max_or_zero(values) -> int:
    return max(values, default=0)


def route_matching(
    h: Graph,
    demands: DemandSet,
    seed: int,
    cfg: Config = DEFAULT_CONFIG,
    alpha: Optional[Union[float, Fraction]] = None,
    base_load: Optional[dict[Edge, int]] = None,
) -> RoutingSolution:
    """Route every demand pair; congestion targets are checked, never assumed.

    Targets (when alpha is given): max edge congestion <= c_cong/alpha*log2 k
    and max path length <= c_len/alpha*log2 k, for k = |V(h)|. If the sweeps
    exhaust without meeting them the solution is still returned with
    met_targets recording the failure.
    """
    if not h.is_connected():
        raise InputError("host graph must be connected")
    for s, t in demands.pairs:
        if not (0 <= s < h.n and 0 <= t < h.n):
            raise InputError(f"demand ({s},{t}) out of host range")

    base = dict(base_load) if base_load else {}
    load: Counter = Counter()
    exp_cache: dict[int, float] = {}

    def weight(e: Edge) -> float:
        total = base.get(e, 0) + load[e]
        w = exp_cache.get(total)
        if w is None:
            w = math.exp(cfg.beta * total)
            exp_cache[total] = w
        return w

    def add(p: Path, sign: int) -> None:
        for e in p.edges():
            load[e] += sign

    paths: list[Optional[Path]] = [None] * len(demands.pairs)
    for i, (s, t) in enumerate(demands.pairs):
        p = shortest_path(h, s, t, weight)
        assert p is not None  # connected host
        paths[i] = p
        add(p, +1)

    rng = random.Random(seed)
    best_max = _max_or_zero(load.values())
    for _ in range(cfg.reroute_sweeps):
        if best_max <= 1:
            break
        snapshot = list(paths)
        order = list(range(len(paths)))
        rng.shuffle(order)
        for i in order:
            add(paths[i], -1)
            s, t = demands.pairs[i]
            p = shortest_path(h, s, t, weight)
            paths[i] = p
            add(p, +1)
        cur_max = _max_or_zero(load.values())
        if cur_max > best_max:
            # the sweep made things worse: restore and stop
            load.clear()
            paths = snapshot
            for p in paths:
                add(p, +1)
            break
        if cur_max == best_max:
            break
        best_max = cur_max

    final_paths = tuple(paths)  # type: ignore[arg-type]
    edge_c, vertex_c = congestion_profile(list(final_paths), h)
    max_edge = _max_or_zero(edge_c.values())
    max_len = _max_or_zero(p.length for p in final_paths)
    met: Optional[bool] = None
    if alpha is not None:
        if not alpha > 0:
            raise InputError("expansion certificate must be positive")
        logk = math.log2(h.n) if h.n > 1 else 1.0
        met = (
            max_edge <= cfg.c_cong / float(alpha) * logk
            and max_len <= cfg.c_len / float(alpha) * logk
        )
    return RoutingSolution(
        host=h,
        demands=demands,
        paths=final_paths,
        edge_congestion=edge_c,
        vertex_congestion=vertex_c,
        max_edge_congestion=max_edge,
        max_path_len=max_len,
        met_targets=met,
    )


@dataclass(frozen=True)
class CongestionProfile:
    edge_congestion: dict[Edge, int]
    vertex_congestion: dict[int, int]
    max_edge_congestion: int
    max_vertex_congestion: int


def accumulate_congestion(solutions: list[RoutingSolution], h: Graph) -> CongestionProfile:
    """Exact pointwise sums of the per-solution profiles on a common host."""
    edge_c: Counter = Counter()
    vertex_c: Counter = Counter()
    for sol in solutions:
        if sol.host != h:
            raise InputError("all solutions must be routed on the same host")
        edge_c.update(sol.edge_congestion)
        vertex_c.update(sol.vertex_congestion)
    return CongestionProfile(
        dict(edge_c),
        dict(vertex_c),
        _max_or_zero(edge_c.values()),
        _max_or_zero(vertex_c.values()),
    )
