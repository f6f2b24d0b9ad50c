"""Connected embeddings of arbitrary graphs into small bipartite 3-regular expanders.

Source vertices are spread over the host by a balanced seeded map; source
edges become a demand multigraph on the host, are decomposed into matchings,
and each matching is routed through the expander. The image of a source
vertex is its anchor plus every routed path of an incident edge, so images
are connected and adjacent sources always share a host vertex.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .config import DEFAULT_CONFIG, Config
from .errors import InputError, VerificationError
from .expander import CertifiedExpander, bipartite_expander
from .graphs import Graph, Multigraph, matching_decomposition
from .routing import DemandSet, RoutingSolution, route_matching


@dataclass(frozen=True)
class ConnectedEmbedding:
    """Map from source vertices to connected host vertex sets, with anchors."""

    host: Graph
    assignment: tuple[frozenset[int], ...]
    anchor: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != len(self.anchor):
            raise InputError("assignment and anchor must cover the same vertices")
        for v, (s, a) in enumerate(zip(self.assignment, self.anchor)):
            if a not in s:
                raise InputError(f"anchor of source vertex {v} is outside its image")

    @property
    def n_source(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class DepthReport:
    """How many source images meet each host vertex, against the target bound."""

    depth: int
    per_vertex: tuple[int, ...]
    bound: float
    fitted_z: float

    def __post_init__(self):
        if self.per_vertex and self.depth != max(self.per_vertex):
            raise InputError("depth must equal the per-vertex maximum")


def balanced_map(g_src: Graph, k: int, seed: int) -> tuple[int, ...]:
    """Seeded balanced assignment of source vertices to host classes 0..k-1.

    Every class receives at most ceil(n/k) vertices.
    """
    if k < 1:
        raise InputError("need at least one class")
    perm = list(range(g_src.n))
    random.Random(seed).shuffle(perm)
    anchor = [0] * g_src.n
    for i, v in enumerate(perm):
        anchor[v] = i % k
    return tuple(anchor)


def demand_graph(
    g_src: Graph, anchor: tuple[int, ...], k: int
) -> tuple[Multigraph, tuple[int, ...]]:
    """Demand multigraph on the host classes; one edge per cross-class source edge.

    Edge ids are the source edge ids (positions in g_src.edge_list). Source
    edges whose endpoints share a class are returned separately.
    """
    if len(anchor) != g_src.n:
        raise InputError("anchor must be total on the source vertices")
    edges = []
    intra = []
    for eid, (u, v) in enumerate(g_src.edge_list):
        a, b = anchor[u], anchor[v]
        if a == b:
            intra.append(eid)
        else:
            edges.append((a, b, eid))
    return Multigraph.from_edges(k, edges), tuple(intra)


def _depth_bound(n_src: int, m_src: int, k: int, z: float) -> float:
    return z * (1.0 + (n_src + m_src) / k) * math.log2(k)


def _make_depth_report(
    assignment, k: int, n_src: int, m_src: int, z: float
) -> DepthReport:
    per_vertex = [0] * k
    for s in assignment:
        for x in s:
            per_vertex[x] += 1
    depth = max(per_vertex, default=0)
    bound = _depth_bound(n_src, m_src, k, z)
    denom = (1.0 + (n_src + m_src) / k) * math.log2(k)
    return DepthReport(depth, tuple(per_vertex), bound, depth / denom)


@dataclass(frozen=True)
class EmbedResult:
    expander: CertifiedExpander
    embedding: ConnectedEmbedding
    depth_report: DepthReport
    routing: tuple[RoutingSolution, ...]
    intra_class_edges: tuple[int, ...]


def embed(g_src: Graph, k: int, seed: int, cfg: Config = DEFAULT_CONFIG) -> EmbedResult:
    """Embed g_src into a certified k-vertex expander with bounded depth.

    Pipeline: build the host, balance-map the sources, decompose the demand
    multigraph into matchings, route each matching, and take each source
    vertex's image to be its anchor plus all routed paths of incident edges.
    By default later matchings are routed against the congestion accumulated
    by earlier ones (cfg.accumulate_congestion=False routes each matching
    against an empty profile). The depth bound with the configured constant
    is asserted, not assumed.
    """
    if k % 2 != 0 or k < 6:
        raise InputError(f"host order must be an even integer >= 6, got {k}")
    master = random.Random(seed)
    host_seed = master.randrange(2**63)
    map_seed = master.randrange(2**63)

    exp = bipartite_expander(k, host_seed, cfg)
    host = exp.graph
    anchor = balanced_map(g_src, k, map_seed)
    demands, intra = demand_graph(g_src, anchor, k)
    matchings = matching_decomposition(demands)

    psi = [{anchor[v]} for v in range(g_src.n)]
    base_load: dict = {}
    solutions = []
    for matching in matchings:
        pairs = [
            (anchor[g_src.edge_list[eid][0]], anchor[g_src.edge_list[eid][1]])
            for eid in matching
        ]
        sol = route_matching(
            host,
            DemandSet.of(pairs),
            master.randrange(2**63),
            cfg,
            alpha=exp.cheeger_lower_bound,
            base_load=base_load if cfg.accumulate_congestion else None,
        )
        solutions.append(sol)
        if cfg.accumulate_congestion:
            for e, c in sol.edge_congestion.items():
                base_load[e] = base_load.get(e, 0) + c
        for eid, path in zip(matching, sol.paths):
            u, v = g_src.edge_list[eid]
            psi[u].update(path.vertices)
            psi[v].update(path.vertices)

    embedding = ConnectedEmbedding(host, tuple(frozenset(s) for s in psi), anchor)
    report = _make_depth_report(
        embedding.assignment, k, g_src.n, len(g_src.edges), cfg.z
    )
    if report.depth > report.bound:
        raise VerificationError(
            f"embedding depth {report.depth} exceeds the configured bound "
            f"{report.bound:.2f}"
        )
    return EmbedResult(exp, embedding, report, tuple(solutions), intra)


@dataclass(frozen=True)
class EmbeddingReport:
    ok: bool
    violations: tuple[str, ...]
    depth_report: DepthReport


def verify_embedding(
    g_src: Graph, emb: ConnectedEmbedding, cfg: Config = DEFAULT_CONFIG
) -> EmbeddingReport:
    """Definitional check of an embedding; violations are reported, not raised.

    Checks nonemptiness and anchored connectivity of every image, the touch
    condition for every source edge, and recomputes the depth accounting
    from scratch.
    """
    violations = []
    host = emb.host
    if emb.n_source != g_src.n:
        violations.append(f"size: embedding covers {emb.n_source} vertices, source has {g_src.n}")
    for v in range(min(emb.n_source, g_src.n)):
        image = emb.assignment[v]
        if not image:
            violations.append(f"empty-image: source vertex {v}")
            continue
        if any(not 0 <= x < host.n for x in image):
            violations.append(f"range: image of source vertex {v} leaves the host")
            continue
        start = emb.anchor[v]
        if start not in image:
            violations.append(f"anchor: source vertex {v} anchor outside image")
            start = min(image)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in host.adjacency[x]:
                if y in image and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != image:
            violations.append(f"disconnected-image: source vertex {v}")
    for u, v in g_src.edge_list:
        a, b = emb.assignment[u], emb.assignment[v]
        if a & b:
            continue
        if any(host.has_edge(x, y) for x in a for y in b):
            continue
        violations.append(f"no-touch: source edge ({u},{v})")
    report = _make_depth_report(
        emb.assignment, host.n, g_src.n, len(g_src.edges), cfg.z
    )
    return EmbeddingReport(not violations, tuple(violations), report)
