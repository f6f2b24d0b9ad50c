import random

import pytest

from cspembed.graphs import Graph, Multigraph


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_multigraph(n: int, m: int, seed: int, max_degree: int | None = None) -> Multigraph:
    rng = random.Random(seed)
    deg = [0] * n
    edges = []
    eid = 0
    attempts = 0
    while len(edges) < m and attempts < 100 * m:
        attempts += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        if max_degree is not None and (deg[u] >= max_degree or deg[v] >= max_degree):
            continue
        edges.append((u, v, eid))
        eid += 1
        deg[u] += 1
        deg[v] += 1
    if len(edges) < m:
        raise AssertionError("could not build the requested multigraph")
    return Multigraph.from_edges(n, edges)


def random_regular(d: int, n: int, seed: int) -> Graph:
    from cspembed.cli import random_regular_graph

    return random_regular_graph(d, n, seed)


@pytest.fixture(scope="session")
def expander_cache():
    """Expander constructions are deterministic per (n, seed); share them."""
    from cspembed.expander import bipartite_expander

    cache = {}

    def get(n: int, seed: int):
        key = (n, seed)
        if key not in cache:
            cache[key] = bipartite_expander(n, seed)
        return cache[key]

    return get
