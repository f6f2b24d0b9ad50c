import math
import random

import pytest

from cspembed.errors import InputError
from cspembed.graphs import Graph
from cspembed.routing import (
    DemandSet,
    accumulate_congestion,
    congestion_profile,
    route_matching,
)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def random_perfect_matching(k: int, seed: int) -> DemandSet:
    perm = list(range(k))
    random.Random(seed).shuffle(perm)
    return DemandSet.of([(perm[2 * i], perm[2 * i + 1]) for i in range(k // 2)])


class TestDemandSet:
    def test_repeated_endpoint_rejected(self):
        with pytest.raises(InputError):
            DemandSet.of([(0, 1), (1, 2)])

    def test_source_equal_target_rejected(self):
        with pytest.raises(InputError):
            DemandSet.of([(3, 3)])


class TestRouteMatching:
    def test_adjacent_demands_use_direct_edges(self, expander_cache):
        exp = expander_cache(12, 0)
        h = exp.graph
        pairs = []
        used = set()
        for u, v in h.edge_list:
            if u not in used and v not in used:
                pairs.append((u, v))
                used.update((u, v))
        sol = route_matching(h, DemandSet.of(pairs), 0)
        assert all(p.length == 1 for p in sol.paths)
        assert sol.max_edge_congestion == 1

    def test_single_demand_on_six_cycle(self):
        sol = route_matching(cycle(6), DemandSet.of([(0, 3)]), 0)
        assert sol.max_path_len == 3
        assert sorted(sol.edge_congestion.values()) == [1, 1, 1]

    def test_endpoints_exact(self, expander_cache):
        h = expander_cache(16, 1).graph
        demands = random_perfect_matching(16, 3)
        sol = route_matching(h, demands, 5)
        for (s, t), p in zip(demands.pairs, sol.paths):
            assert p.vertices[0] == s and p.vertices[-1] == t

    def test_paths_valid_and_bookkeeping_exact(self, expander_cache):
        h = expander_cache(16, 1).graph
        for seed in range(10):
            sol = route_matching(h, random_perfect_matching(16, seed), seed)
            for p in sol.paths:
                assert p.is_valid_in(h)
            edge_c, vertex_c = congestion_profile(list(sol.paths), h)
            assert edge_c == sol.edge_congestion
            assert vertex_c == sol.vertex_congestion
            assert sol.max_edge_congestion == max(edge_c.values())

    def test_vertex_congestion_bounded_by_incident_edges(self, expander_cache):
        h = expander_cache(16, 1).graph
        sol = route_matching(h, random_perfect_matching(16, 7), 7)
        endpoints = [x for pair in sol.demands.pairs for x in pair]
        for v in range(h.n):
            incident = sum(
                sol.edge_congestion.get((min(v, w), max(v, w)), 0)
                for w in h.neighbors(v)
            )
            assert sol.vertex_congestion.get(v, 0) <= incident + endpoints.count(v)

    def test_deterministic(self, expander_cache):
        h = expander_cache(16, 1).graph
        demands = random_perfect_matching(16, 11)
        a = route_matching(h, demands, 13)
        b = route_matching(h, demands, 13)
        assert a.paths == b.paths
        assert a.edge_congestion == b.edge_congestion

    def test_congestion_within_target_on_expanders(self, expander_cache):
        for k in (16, 32):
            h = expander_cache(k, 0).graph
            for trial in range(5):
                sol = route_matching(h, random_perfect_matching(k, trial), trial)
                assert sol.max_edge_congestion <= 8 * math.log2(k)

    def test_unmet_targets_reported_not_dropped(self, expander_cache):
        exp = expander_cache(16, 0)
        sol = route_matching(
            exp.graph, random_perfect_matching(16, 2), 2, alpha=1000.0
        )
        assert sol.met_targets is False
        assert len(sol.paths) == 8

    def test_met_targets_with_certificate(self, expander_cache):
        exp = expander_cache(16, 0)
        sol = route_matching(
            exp.graph,
            random_perfect_matching(16, 2),
            2,
            alpha=exp.cheeger_lower_bound,
        )
        assert sol.met_targets is True

    def test_disconnected_host_rejected(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(InputError):
            route_matching(g, DemandSet.of([(0, 1)]), 0)

    def test_base_load_steers_away(self):
        # a heavily preloaded direct edge makes the alternative arc cheaper
        h = cycle(4)
        sol = route_matching(h, DemandSet.of([(0, 1)]), 0, base_load={(0, 1): 10})
        assert sol.paths[0].vertices == (0, 3, 2, 1)


class TestAccumulate:
    def test_single_solution_identity(self, expander_cache):
        h = expander_cache(16, 1).graph
        sol = route_matching(h, random_perfect_matching(16, 0), 0)
        acc = accumulate_congestion([sol], h)
        assert acc.edge_congestion == sol.edge_congestion
        assert acc.vertex_congestion == sol.vertex_congestion

    def test_pointwise_sum(self, expander_cache):
        h = expander_cache(16, 1).graph
        sols = [route_matching(h, random_perfect_matching(16, s), s) for s in range(4)]
        acc = accumulate_congestion(sols, h)
        for e in h.edge_list:
            assert acc.edge_congestion.get(e, 0) == sum(
                s.edge_congestion.get(e, 0) for s in sols
            )
        assert acc.max_edge_congestion <= sum(s.max_edge_congestion for s in sols)

    def test_host_mismatch_rejected(self, expander_cache):
        h = expander_cache(16, 1).graph
        other = expander_cache(18, 1).graph
        sol = route_matching(h, random_perfect_matching(16, 0), 0)
        with pytest.raises(InputError):
            accumulate_congestion([sol], other)
