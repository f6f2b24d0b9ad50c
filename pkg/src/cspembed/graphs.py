"""Simple graphs, multigraphs, and the structural algorithms everything else consumes.

Vertices are dense integers 0..n-1. All types are immutable after
construction and every operation is a pure function of its inputs, with
deterministic (sorted) iteration order so seeded procedures reproduce
exactly.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Optional

from .errors import InputError

Edge = tuple[int, int]


def _normalize_edge(u: int, v: int) -> Edge:
    if u == v:
        raise InputError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: no self-loops, no parallel edges."""

    n: int
    edges: frozenset[Edge]

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        norm = set()
        for u, v in edges:
            e = _normalize_edge(u, v)
            if not (0 <= e[0] and e[1] < n):
                raise InputError(f"edge {e} out of range for n={n}")
            norm.add(e)
        return Graph(n, frozenset(norm))

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be nonnegative")
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise InputError(f"invalid edge ({u},{v}) for n={self.n}")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def edge_list(self) -> tuple[Edge, ...]:
        """Edges in canonical sorted order; index in this tuple is the edge id."""
        return tuple(sorted(self.edges))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        return _normalize_edge(u, v) in self.edges

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def is_regular(self, d: Optional[int] = None) -> bool:
        degs = set(self.degrees())
        if len(degs) > 1:
            return False
        if d is None:
            return True
        return self.n == 0 or degs == {d}

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = [False] * self.n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for w in self.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "edges": [list(e) for e in self.edge_list]},
            separators=(",", ":"),
            sort_keys=True,
        )

    @staticmethod
    def from_json(s: str) -> "Graph":
        raw = json.loads(s)
        return Graph.from_edges(raw["n"], [tuple(e) for e in raw["edges"]])


class Side(Enum):
    LEFT = "L"
    RIGHT = "R"


@dataclass(frozen=True)
class Bipartition:
    """Certified two-coloring: every edge joins LEFT to RIGHT."""

    side: tuple[Side, ...]

    @property
    def left(self) -> tuple[int, ...]:
        return tuple(v for v, s in enumerate(self.side) if s is Side.LEFT)

    @property
    def right(self) -> tuple[int, ...]:
        return tuple(v for v, s in enumerate(self.side) if s is Side.RIGHT)

    @property
    def balanced(self) -> bool:
        return len(self.left) == len(self.right)

    def is_valid_for(self, g: Graph) -> bool:
        if len(self.side) != g.n:
            return False
        return all(self.side[u] is not self.side[v] for u, v in g.edges)


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; parallel edges carry distinct ids, no self-loops."""

    n: int
    edges: tuple[tuple[int, int, int], ...]  # (u, v, edge_id) with u < v

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int, int]]) -> "Multigraph":
        norm = []
        ids = set()
        for u, v, eid in edges:
            a, b = _normalize_edge(u, v)
            if not (0 <= a and b < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            if eid in ids:
                raise InputError(f"duplicate edge id {eid}")
            ids.add(eid)
            norm.append((a, b, eid))
        norm.sort()
        return Multigraph(n, tuple(norm))

    def degree(self, v: int) -> int:
        return sum(1 for u, w, _ in self.edges if v in (u, w))

    def max_degree(self) -> int:
        deg = [0] * self.n
        for u, w, _ in self.edges:
            deg[u] += 1
            deg[w] += 1
        return max(deg, default=0)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "edges": [[u, v] for u, v, _ in self.edges],
                "edge_ids": [eid for _, _, eid in self.edges],
            },
            separators=(",", ":"),
            sort_keys=True,
        )

    @staticmethod
    def from_json(s: str) -> "Multigraph":
        raw = json.loads(s)
        return Multigraph.from_edges(
            raw["n"],
            [(u, v, eid) for (u, v), eid in zip(raw["edges"], raw["edge_ids"])],
        )


@dataclass(frozen=True)
class Path:
    """Nonempty vertex sequence with consecutive vertices adjacent in the host.

    A single vertex is the trivial path. A closed walk (first == last)
    represents a cycle of length len(vertices) - 1.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise InputError("path must be nonempty")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[Edge]:
        return [
            _normalize_edge(a, b)
            for a, b in zip(self.vertices, self.vertices[1:])
        ]

    def is_valid_in(self, g: Graph) -> bool:
        return all(g.has_edge(a, b) for a, b in zip(self.vertices, self.vertices[1:]))


def is_bipartite(g: Graph) -> Optional[Bipartition]:
    """BFS two-coloring; None exactly when an odd cycle exists.

    Unreached vertices (isolated or in later components) are colored by the
    first color of their own BFS tree, so the output is deterministic.
    """
    side: list[Optional[Side]] = [None] * g.n
    for root in range(g.n):
        if side[root] is not None:
            continue
        side[root] = Side.LEFT
        queue = [root]
        while queue:
            nxt = []
            for u in queue:
                for w in g.adjacency[u]:
                    if side[w] is None:
                        side[w] = Side.RIGHT if side[u] is Side.LEFT else Side.LEFT
                        nxt.append(w)
                    elif side[w] is side[u]:
                        return None
            queue = nxt
    return Bipartition(tuple(side))  # type: ignore[arg-type]


def _bfs_parents(adj, source: int, n: int):
    dist = [-1] * n
    parent = [-1] * n
    dist[source] = 0
    queue = [source]
    while queue:
        nxt = []
        for u in queue:
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    nxt.append(w)
        queue = nxt
    return dist, parent


def min_odd_cycle(g: Graph) -> Optional[Path]:
    """A shortest odd cycle, as a closed walk first==last; None iff bipartite.

    BFS on the bipartite lift: the distance from (v, even) to (v, odd) is the
    length of the shortest odd closed walk through v, and a shortest odd
    closed walk is always a simple cycle. Deterministic: lowest base vertex
    first, sorted adjacency.
    """
    n = g.n
    # lift vertex (v, parity) -> v + parity * n
    lift_adj: list[list[int]] = [[] for _ in range(2 * n)]
    for u, v in sorted(g.edges):
        lift_adj[u].append(v + n)
        lift_adj[v].append(u + n)
        lift_adj[u + n].append(v)
        lift_adj[v + n].append(u)
    for a in lift_adj:
        a.sort()

    best: Optional[tuple[int, int]] = None  # (cycle length, base vertex)
    best_parent = None
    for v in range(n):
        dist, parent = _bfs_parents(lift_adj, v, 2 * n)
        if dist[v + n] < 0:
            continue
        if best is None or dist[v + n] < best[0]:
            best = (dist[v + n], v)
            best_parent = parent
    if best is None:
        return None
    length, v = best
    walk = [v + g.n]
    while walk[-1] != v:
        walk.append(best_parent[walk[-1]])
    walk.reverse()
    cycle = tuple(x % g.n for x in walk)
    assert len(set(cycle[:-1])) == length, "shortest odd closed walk must be simple"
    return Path(cycle)


def double_cover(g: Graph) -> Graph:
    """Bipartite lift on 2n vertices: i-left adjacent to j-right iff {i,j} in E.

    Adjacency block form [[0, A], [A, 0]]; always bipartite, preserves
    regularity, and mirrors the spectrum as {+lambda, -lambda}.
    """
    n = g.n
    edges = set()
    for u, v in g.edges:
        edges.add((u, v + n))
        edges.add((v, u + n))
    return Graph.from_edges(2 * n, edges)


def matching_decomposition(d: Multigraph) -> list[list[int]]:
    """Partition the edge ids into matchings via greedy proper edge coloring.

    Each edge conflicts with at most 2*max_degree - 2 neighbors, so at most
    2*max_degree - 1 colors are used. Edges are processed in canonical order.
    """
    color_of: dict[int, int] = {}
    incident_colors: list[set[int]] = [set() for _ in range(d.n)]
    for u, v, eid in d.edges:
        used = incident_colors[u] | incident_colors[v]
        c = 0
        while c in used:
            c += 1
        color_of[eid] = c
        incident_colors[u].add(c)
        incident_colors[v].add(c)
    if not color_of:
        return []
    matchings: list[list[int]] = [[] for _ in range(max(color_of.values()) + 1)]
    for _, _, eid in d.edges:
        matchings[color_of[eid]].append(eid)
    return matchings


def shortest_path(
    g: Graph,
    s: int,
    t: int,
    weights: Optional[Callable[[Edge], float]] = None,
) -> Optional[Path]:
    """Minimum-weight s-t path (Dijkstra); None iff t unreachable.

    Ties are broken toward the lexicographically smallest vertex sequence,
    which makes routing deterministic (exact for positive weights; unit
    weights when ``weights`` is None).
    """
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise InputError(f"endpoints ({s},{t}) out of range")
    if weights is None:
        weights = lambda e: 1.0
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (s,))]
    done = [False] * g.n
    while heap:
        cost, path = heapq.heappop(heap)
        u = path[-1]
        if done[u]:
            continue
        done[u] = True
        if u == t:
            return Path(path)
        for w in g.adjacency[u]:
            if not done[w]:
                cw = weights(_normalize_edge(u, w))
                if cw < 0:
                    raise InputError("negative edge weight")
                heapq.heappush(heap, (cost + cw, path + (w,)))
    return None
