"""Compile a binary CSP onto a host graph through a connected embedding.

Each host vertex simulates the source vertices whose images contain it, over
a tuple alphabet with one slot per simulated vertex (no padding slots, so
the reduction preserves the exact solution count). Host-edge relations
enforce agreement on shared source vertices plus every source constraint
whose endpoints are simulated nearby. Assignments transport losslessly in
both directions.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from .config import DEFAULT_CONFIG, Config
from .csp import Assignment, CspInstance, Relation, is_satisfied
from .embedding import ConnectedEmbedding, EmbedResult, embed, verify_embedding
from .errors import DecodeDisagreementError, InputError, VerificationError
from .graphs import Edge, Graph


def tuple_rank(values: tuple[int, ...], radix: int) -> int:
    """Little-endian mixed-radix rank: slot i carries radix**i."""
    rank = 0
    for i, val in enumerate(values):
        if not 0 <= val < radix:
            raise InputError(f"slot value {val} outside radix {radix}")
        rank += val * radix**i
    return rank


def tuple_unrank(rank: int, length: int, radix: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(rank % radix)
        rank //= radix
    if rank:
        raise InputError("rank exceeds the tuple space")
    return tuple(out)


@dataclass(frozen=True)
class BagIndex:
    """Per-host-vertex bags of simulated source vertices and induced edge lists."""

    host: Graph
    members: tuple[tuple[int, ...], ...]  # sorted source vertices per host vertex
    internal_edges: tuple[tuple[Edge, ...], ...]  # source edges inside one bag
    shared: dict[Edge, tuple[int, ...]]  # host edge -> source vertices in both bags
    cross_edges: dict[Edge, tuple[Edge, ...]]  # host edge -> source edges split across
    images: tuple[tuple[int, ...], ...]  # source vertex -> sorted host vertices

    def depth(self, x: int) -> int:
        return len(self.members[x])

    def position(self, x: int, v: int) -> int:
        # bags are small; linear scan keeps the structure plain
        return self.members[x].index(v)


def build_bag_index(g_src: Graph, emb: ConnectedEmbedding) -> BagIndex:
    """Index an embedding for compilation; refuses embeddings with violations.

    Bag order is ascending source-vertex id, which fixes the slot layout of
    every tuple alphabet.
    """
    report = verify_embedding(g_src, emb)
    if not report.ok:
        raise InputError(
            "embedding fails verification: " + "; ".join(report.violations)
        )
    host = emb.host
    members: list[list[int]] = [[] for _ in range(host.n)]
    for v in range(g_src.n):
        for x in emb.assignment[v]:
            members[x].append(v)
    members_t = tuple(tuple(sorted(ms)) for ms in members)
    member_sets = [set(ms) for ms in members_t]
    internal = tuple(
        tuple(
            e
            for e in g_src.edge_list
            if e[0] in member_sets[x] and e[1] in member_sets[x]
        )
        for x in range(host.n)
    )
    shared = {}
    cross = {}
    for x, y in host.edge_list:
        shared[(x, y)] = tuple(sorted(member_sets[x] & member_sets[y]))
        cross[(x, y)] = tuple(
            (u, v)
            for u, v in g_src.edge_list
            if (u in member_sets[x] and v in member_sets[y])
            or (v in member_sets[x] and u in member_sets[y])
        )
    covered = set()
    for x in range(host.n):
        if host.degree(x) > 0:
            covered.update(internal[x])
    for es in cross.values():
        covered.update(es)
    missing = [e for e in g_src.edge_list if e not in covered]
    if missing:
        raise VerificationError(f"source edges not covered by any bag: {missing}")
    images = tuple(tuple(sorted(emb.assignment[v])) for v in range(g_src.n))
    return BagIndex(host, members_t, internal, shared, cross, images)


class CompiledRelation(Relation):
    """Host-edge constraint: slot agreement on shared source vertices plus the
    source relations on cross and bag-internal source edges."""

    def __init__(
        self,
        radix: int,
        d_x: int,
        d_y: int,
        shared_slots: list[tuple[int, int]],
        cross_checks: list[tuple[int, int, Relation, bool]],
        internal_x: list[tuple[int, int, Relation]],
        internal_y: list[tuple[int, int, Relation]],
    ):
        self.radix = radix
        self.d_x = d_x
        self.d_y = d_y
        self.shared_slots = shared_slots
        self.cross_checks = cross_checks
        self.internal_x = internal_x
        self.internal_y = internal_y
        self._cache_x: dict[int, tuple[int, ...]] = {}
        self._cache_y: dict[int, tuple[int, ...]] = {}

    def _tuple_x(self, a: int) -> tuple[int, ...]:
        t = self._cache_x.get(a)
        if t is None:
            t = tuple_unrank(a, self.d_x, self.radix)
            self._cache_x[a] = t
        return t

    def _tuple_y(self, b: int) -> tuple[int, ...]:
        t = self._cache_y.get(b)
        if t is None:
            t = tuple_unrank(b, self.d_y, self.radix)
            self._cache_y[b] = t
        return t

    def accepts(self, a: int, b: int) -> bool:
        ta = self._tuple_x(a)
        tb = self._tuple_y(b)
        for i, j in self.shared_slots:
            if ta[i] != tb[j]:
                return False
        for i, j, rel, x_is_lower in self.cross_checks:
            ok = rel.accepts(ta[i], tb[j]) if x_is_lower else rel.accepts(tb[j], ta[i])
            if not ok:
                return False
        for i, j, rel in self.internal_x:
            if not rel.accepts(ta[i], ta[j]):
                return False
        for i, j, rel in self.internal_y:
            if not rel.accepts(tb[i], tb[j]):
                return False
        return True


@dataclass(frozen=True)
class CompiledInstance:
    """The compiled CSP plus everything needed to transport assignments."""

    phi: CspInstance
    source: CspInstance
    embedding: ConnectedEmbedding
    bag_index: BagIndex
    sigma_size: int

    def encode_assignment(self, sigma: Assignment) -> Assignment:
        return encode_assignment(sigma, self.bag_index, self.sigma_size)

    def decode_assignment(self, sigma_tilde: Assignment) -> Assignment:
        return decode_assignment(sigma_tilde, self.bag_index, self.sigma_size)


def compile_instance(
    gamma: CspInstance,
    host: Graph,
    emb: ConnectedEmbedding,
    dedupe_internal: bool = False,
) -> CompiledInstance:
    """Emit the host-graph CSP equivalent to gamma under the embedding.

    Every bag-internal source edge is enforced on every host edge incident
    to its bag (dedupe_internal=True attaches it only to the least incident
    host edge; the satisfying set is identical). Hosts with isolated
    vertices are refused: their bags' constraints would go unchecked.
    """
    sigma = gamma.uniform_alphabet
    if sigma is None:
        raise InputError("compilation requires a uniform source alphabet")
    if emb.host != host:
        raise InputError("embedding was built for a different host")
    if gamma.graph.n != emb.n_source:
        raise InputError("embedding does not cover the source instance")
    if any(host.degree(x) == 0 for x in range(host.n)):
        raise InputError("host has an isolated vertex; its constraints would be unchecked")
    idx = build_bag_index(gamma.graph, emb)

    least_incident: dict[int, Edge] = {}
    for x in range(host.n):
        incident = [e for e in host.edge_list if x in e]
        least_incident[x] = min(incident)

    enforced: set[Edge] = set()
    constraints: dict[Edge, Relation] = {}
    for x, y in host.edge_list:
        pos_x = {v: i for i, v in enumerate(idx.members[x])}
        pos_y = {v: i for i, v in enumerate(idx.members[y])}
        shared_slots = [(pos_x[v], pos_y[v]) for v in idx.shared[(x, y)]]
        cross_checks = []
        for u, v in idx.cross_edges[(x, y)]:
            rel = gamma.constraints[(u, v)]
            if u in pos_x and v in pos_y:
                cross_checks.append((pos_x[u], pos_y[v], rel, True))
                enforced.add((u, v))
            if v in pos_x and u in pos_y:
                cross_checks.append((pos_x[v], pos_y[u], rel, False))
                enforced.add((u, v))
        internal_x = []
        internal_y = []
        if not dedupe_internal or least_incident[x] == (x, y):
            for u, v in idx.internal_edges[x]:
                internal_x.append((pos_x[u], pos_x[v], gamma.constraints[(u, v)]))
                enforced.add((u, v))
        if not dedupe_internal or least_incident[y] == (x, y):
            for u, v in idx.internal_edges[y]:
                internal_y.append((pos_y[u], pos_y[v], gamma.constraints[(u, v)]))
                enforced.add((u, v))
        constraints[(x, y)] = CompiledRelation(
            sigma,
            idx.depth(x),
            idx.depth(y),
            shared_slots,
            cross_checks,
            internal_x,
            internal_y,
        )
    missing = [e for e in gamma.graph.edge_list if e not in enforced]
    if missing:
        raise VerificationError(f"source constraints left unenforced: {missing}")
    sizes = tuple(sigma ** idx.depth(x) for x in range(host.n))
    phi = CspInstance(host, sizes, constraints)
    return CompiledInstance(phi, gamma, emb, idx, sigma)


def encode_assignment(
    sigma: Assignment, idx: BagIndex, alphabet_size: int
) -> Assignment:
    """Tuple assignment whose slot for source v at host x carries sigma[v]."""
    if len(sigma) != len(idx.images):
        raise InputError("assignment must be total on the source vertices")
    return tuple(
        tuple_rank(tuple(sigma[v] for v in idx.members[x]), alphabet_size)
        for x in range(idx.host.n)
    )


def decode_assignment(
    sigma_tilde: Assignment, idx: BagIndex, alphabet_size: int
) -> Assignment:
    """Read each source value off its representatives; all must agree.

    Disagreement means sigma_tilde is not a satisfying assignment and raises
    a diagnostic naming the source vertex and the conflicting hosts.
    """
    if len(sigma_tilde) != idx.host.n:
        raise InputError("assignment must be total on the host vertices")
    decoded: list[dict[int, int]] = []
    for x in range(idx.host.n):
        t = tuple_unrank(sigma_tilde[x], idx.depth(x), alphabet_size)
        decoded.append({v: t[i] for i, v in enumerate(idx.members[x])})
    out = []
    for v, hosts in enumerate(idx.images):
        if not hosts:
            raise InputError(f"source vertex {v} has an empty image")
        first = hosts[0]
        val = decoded[first][v]
        for x in hosts[1:]:
            if decoded[x][v] != val:
                raise DecodeDisagreementError(v, first, x)
        out.append(val)
    return tuple(out)


@dataclass(frozen=True)
class PipelineResult:
    compiled: CompiledInstance
    embed_result: EmbedResult
    metrics: dict


def pipeline(
    gamma: CspInstance, k: int, seed: int, cfg: Config = DEFAULT_CONFIG
) -> PipelineResult:
    """Embed gamma's constraint graph into a k-vertex expander and compile.

    Metrics record the stage sizes, the depth and its bound, the congestion
    seen while routing, and wall-clock stage timings.
    """
    t0 = time.perf_counter()
    result = embed(gamma.graph, k, seed, cfg)
    t1 = time.perf_counter()
    compiled = compile_instance(gamma, result.embedding.host, result.embedding)
    t2 = time.perf_counter()
    report = result.depth_report
    sigma = compiled.sigma_size
    max_depth = max((compiled.bag_index.depth(x) for x in range(k)), default=0)
    metrics = {
        "source_vertices": gamma.graph.n,
        "source_edges": len(gamma.graph.edges),
        "host_vertices": result.embedding.host.n,
        "host_edges": len(result.embedding.host.edges),
        "depth": report.depth,
        "depth_bound": report.bound,
        "fitted_z": report.fitted_z,
        "max_alphabet": sigma**max_depth,
        "alphabet_ok": max_depth <= report.bound,
        "max_edge_congestion": max(
            (sol.max_edge_congestion for sol in result.routing), default=0
        ),
        "seed": seed,
        "timings": {"embed": t1 - t0, "compile": t2 - t1},
    }
    if result.embedding.host.n > k:
        raise VerificationError("host exceeded the requested order")
    return PipelineResult(compiled, result, metrics)


def select_host_size(
    n_vertices: int,
    n_edges: int,
    alphabet_size: int,
    max_alphabet: int,
    z: float = DEFAULT_CONFIG.z,
    k_max: int = 4096,
) -> Optional[int]:
    """Largest even host order whose predicted compiled alphabet stays within
    max_alphabet, by the depth bound z*(1+(n+m)/k)*log2(k); None if none."""
    if alphabet_size < 2:
        return k_max if k_max % 2 == 0 else k_max - 1
    budget = math.log(max_alphabet) / math.log(alphabet_size)
    for k in range(k_max - (k_max % 2), 5, -2):
        if z * (1.0 + (n_vertices + n_edges) / k) * math.log2(k) <= budget:
            return k
    return None


class PaddedRelation(Relation):
    """Wrapper that ignores the padding slots of a uniform-width tuple."""

    def __init__(self, inner: Relation, radix: int, d_x: int, d_y: int):
        self.inner = inner
        self.mod_x = radix**d_x
        self.mod_y = radix**d_y

    def accepts(self, a: int, b: int) -> bool:
        return self.inner.accepts(a % self.mod_x, b % self.mod_y)


def to_padded_alphabet(compiled: CompiledInstance) -> CspInstance:
    """Uniform-alphabet form over tuples of the maximum bag size.

    Padding slots are unconstrained, so satisfiability is preserved but the
    solution count inflates by the padding freedom; the no-padding form is
    the parsimonious one.
    """
    idx = compiled.bag_index
    host = idx.host
    d = max((idx.depth(x) for x in range(host.n)), default=0)
    sigma = compiled.sigma_size
    constraints: dict[Edge, Relation] = {}
    for x, y in host.edge_list:
        constraints[(x, y)] = PaddedRelation(
            compiled.phi.constraints[(x, y)], sigma, idx.depth(x), idx.depth(y)
        )
    return CspInstance(host, (sigma**d,) * host.n, constraints)


def assert_transport(compiled: CompiledInstance, sigma: Assignment) -> Assignment:
    """Encode a source solution, check it satisfies the compiled instance,
    and check the round trip; returns the encoded assignment."""
    if not is_satisfied(compiled.source, sigma):
        raise InputError("assignment does not satisfy the source instance")
    encoded = compiled.encode_assignment(sigma)
    if not is_satisfied(compiled.phi, encoded):
        raise VerificationError("encoded assignment fails the compiled instance")
    if compiled.decode_assignment(encoded) != sigma:
        raise VerificationError("decode(encode(sigma)) differs from sigma")
    return encoded
