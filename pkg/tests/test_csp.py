import itertools
import json

import pytest

from cspembed.csp import (
    CspInstance,
    ExplicitRelation,
    IntensionalRelation,
    clique_instance,
    coloring_instance,
    count_satisfying,
    csp_from_json,
    csp_to_json,
    equality_relation,
    four_regular_coloring_instance,
    full_relation,
    inequality_relation,
    is_satisfied,
    random_instance,
    regularize,
    solve_bruteforce,
)
from cspembed.errors import BudgetError, InputError
from cspembed.graphs import Graph

from conftest import random_graph


def brute_solutions(inst: CspInstance) -> list[tuple[int, ...]]:
    """Oracle: try every assignment in lexicographic vertex order."""
    out = []
    for a in itertools.product(*[range(s) for s in inst.alphabet_sizes]):
        if all(rel.accepts(a[u], a[v]) for (u, v), rel in inst.constraints.items()):
            out.append(a)
    return out


def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def octahedron() -> Graph:
    edges = [
        (u, v)
        for u in range(6)
        for v in range(u + 1, 6)
        if {u, v} not in ({0, 1}, {2, 3}, {4, 5})
    ]
    return Graph.from_edges(6, edges)


class TestIsSatisfied:
    def test_no_edges_vacuous(self):
        inst = CspInstance(Graph.from_edges(3, []), (2, 2, 2), {})
        assert is_satisfied(inst, (0, 1, 0))

    def test_single_inequality(self):
        inst = coloring_instance(Graph.from_edges(2, [(0, 1)]), 2)
        assert is_satisfied(inst, (0, 1))
        assert not is_satisfied(inst, (1, 1))

    def test_triangle_proper_coloring(self):
        assert is_satisfied(coloring_instance(triangle(), 3), (0, 1, 2))

    def test_out_of_range_rejected(self):
        inst = coloring_instance(triangle(), 3)
        with pytest.raises(InputError):
            is_satisfied(inst, (0, 1, 3))
        with pytest.raises(InputError):
            is_satisfied(inst, (0, 1))


class TestSolveBruteforce:
    def test_odd_cycle_two_colors_unsat(self):
        assert solve_bruteforce(coloring_instance(cycle(5), 2)) is None

    def test_triangle_lex_first(self):
        assert solve_bruteforce(coloring_instance(triangle(), 3)) == (0, 1, 2)

    def test_empty_relation_unsat(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        constraints = {
            (0, 1): full_relation(2, 2),
            (1, 2): ExplicitRelation(frozenset()),
        }
        inst = CspInstance(g, (2, 2, 2), constraints)
        assert solve_bruteforce(inst) is None

    def test_budget_refusal(self):
        inst = coloring_instance(cycle(6), 3)
        with pytest.raises(BudgetError):
            solve_bruteforce(inst, budget=100)

    def test_lex_first_matches_enumeration(self):
        for seed in range(60):
            inst = random_instance(5, 0.5, 3, 0.5, seed)
            expected = brute_solutions(inst)
            got = solve_bruteforce(inst)
            if not expected:
                assert got is None
            else:
                assert got == expected[0]
                assert is_satisfied(inst, got)


class TestCountSatisfying:
    def test_single_inequality_edge(self):
        assert count_satisfying(coloring_instance(Graph.from_edges(2, [(0, 1)]), 2)) == 2

    def test_triangle_three_colors(self):
        assert count_satisfying(coloring_instance(triangle(), 3)) == 6

    def test_no_edges_product_rule(self):
        inst = CspInstance(Graph.from_edges(4, []), (3, 3, 3, 3), {})
        assert count_satisfying(inst) == 81

    def test_matches_enumeration(self):
        for seed in range(60):
            inst = random_instance(5, 0.6, 2, 0.6, seed + 500)
            assert count_satisfying(inst) == len(brute_solutions(inst))

    def test_positive_iff_solvable(self):
        for seed in range(40):
            inst = random_instance(5, 0.5, 3, 0.4, seed + 900)
            assert (count_satisfying(inst) >= 1) == (solve_bruteforce(inst) is not None)


def chromatic_number(g: Graph) -> int:
    for q in range(1, g.n + 1):
        for colors in itertools.product(range(q), repeat=g.n):
            if all(colors[u] != colors[v] for u, v in g.edges):
                return q
    return g.n


class TestColoringInstance:
    def test_relation_size(self):
        inst = coloring_instance(triangle(), 3)
        rel = inst.constraints[(0, 1)]
        assert len(rel.pairs) == 6

    def test_k5_unsat(self):
        k5 = Graph.from_edges(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
        assert solve_bruteforce(coloring_instance(k5, 3)) is None

    def test_octahedron_sat(self):
        assert solve_bruteforce(coloring_instance(octahedron(), 3)) is not None

    def test_satisfiable_iff_chromatic(self):
        for seed in range(30):
            g = random_graph(6, 0.5, seed)
            q = 3
            sat = solve_bruteforce(coloring_instance(g, q)) is not None
            assert sat == (chromatic_number(g) <= q)


class TestFourRegularPadding:
    def test_already_regular_unchanged(self):
        inst = four_regular_coloring_instance(octahedron(), 3)
        assert inst.graph == octahedron()

    def test_padded_to_regular_with_full_dummies(self):
        g = cycle(6)
        inst = four_regular_coloring_instance(g, 3)
        assert inst.graph.is_regular(4)
        for e in inst.graph.edges:
            rel = inst.constraints[e]
            if e in g.edges:
                assert len(rel.pairs) == 6
            else:
                assert len(rel.pairs) == 9

    def test_satisfiability_preserved(self):
        checked = 0
        seed = 0
        while checked < 50:
            g = random_graph(6, 0.4, seed)
            seed += 1
            if max(g.degrees()) > 4:
                continue
            try:
                padded = four_regular_coloring_instance(g, 3)
            except InputError:
                continue
            plain = coloring_instance(g, 3)
            assert (solve_bruteforce(padded) is None) == (solve_bruteforce(plain) is None)
            checked += 1

    def test_impossible_padding_refused(self):
        with pytest.raises(InputError):
            four_regular_coloring_instance(triangle(), 3)


class TestCliqueInstance:
    def test_edge_exists(self):
        assert solve_bruteforce(clique_instance(cycle(5), 2)) is not None

    def test_triangle_free(self):
        assert solve_bruteforce(clique_instance(cycle(5), 3)) is None

    def test_constraint_count(self):
        inst = clique_instance(cycle(5), 4)
        assert len(inst.graph.edges) == 6

    def test_matches_clique_search(self):
        for seed in range(25):
            g = random_graph(8, 0.5, seed + 50)
            for k in (3, 4):
                has = any(
                    all(g.has_edge(a, b) for a, b in itertools.combinations(c, 2))
                    for c in itertools.combinations(range(g.n), k)
                )
                sat = solve_bruteforce(clique_instance(g, k)) is not None
                assert sat == has


def min_degree_3_graph(seed: int) -> Graph:
    g = random_graph(6, 0.7, seed)
    if min(g.degrees()) >= 3:
        return g
    return min_degree_3_graph(seed + 1000)


class TestRegularize:
    def test_ready_input_sizes(self):
        for seed in range(5):
            g = min_degree_3_graph(seed)
            inst = CspInstance(
                g, (2,) * 6, {e: inequality_relation(2) for e in g.edges}
            )
            out = regularize(inst)
            assert out.graph.n == 2 * len(g.edges)
            assert out.graph.is_regular(3)

    def test_satisfiability_and_count_preserved(self):
        for seed in range(40):
            inst = random_instance(5, 0.8, 2, 0.6, seed + 40)
            if any(d == 0 for d in inst.graph.degrees()):
                continue
            out = regularize(inst)
            assert out.graph.is_regular(3)
            assert count_satisfying(out, None) == count_satisfying(inst)

    def test_low_degree_vertices_handled(self):
        # path a-b-c has degrees 1, 2, 1
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        inst = CspInstance(g, (2,) * 3, {e: equality_relation(2) for e in g.edges})
        out = regularize(inst)
        assert out.graph.is_regular(3)
        assert count_satisfying(out) == count_satisfying(inst)

    def test_single_edge(self):
        g = Graph.from_edges(2, [(0, 1)])
        inst = CspInstance(g, (3, 3), {(0, 1): inequality_relation(3)})
        out = regularize(inst)
        assert out.graph.is_regular(3)
        assert count_satisfying(out) == 6

    def test_degree_zero_refused(self):
        g = Graph.from_edges(3, [(0, 1)])
        inst = CspInstance(g, (2,) * 3, {(0, 1): equality_relation(2)})
        with pytest.raises(InputError):
            regularize(inst)

    def test_non_uniform_refused(self):
        g = Graph.from_edges(2, [(0, 1)])
        inst = CspInstance(g, (2, 3), {(0, 1): full_relation(2, 3)})
        with pytest.raises(InputError):
            regularize(inst)


class TestRandomInstance:
    def test_full_density_satisfiable(self):
        inst = random_instance(5, 0.9, 3, 1.0, 0)
        assert solve_bruteforce(inst) is not None

    def test_zero_density_unsat(self):
        inst = random_instance(5, 1.0, 3, 0.0, 0)
        assert len(inst.graph.edges) > 0
        assert solve_bruteforce(inst) is None

    def test_deterministic(self):
        a = random_instance(6, 0.5, 3, 0.5, 123)
        b = random_instance(6, 0.5, 3, 0.5, 123)
        assert a.graph == b.graph and a.constraints == b.constraints


class TestSerialization:
    def test_round_trip(self):
        for seed in range(10):
            inst = random_instance(6, 0.5, 3, 0.5, seed)
            s = csp_to_json(inst)
            back = csp_from_json(s)
            assert back.graph == inst.graph
            assert back.alphabet_sizes == inst.alphabet_sizes
            assert back.constraints == inst.constraints
            assert csp_to_json(back) == s

    def test_intensional_materialized_in_json(self):
        g = Graph.from_edges(2, [(0, 1)])
        rel = IntensionalRelation(lambda a, b: a == b, 3, 3)
        inst = CspInstance(g, (3, 3), {(0, 1): rel})
        raw = json.loads(csp_to_json(inst))
        assert raw["edges"][0]["pairs"] == [[0, 0], [1, 1], [2, 2]]

    def test_oversized_intensional_refused(self):
        g = Graph.from_edges(2, [(0, 1)])
        rel = IntensionalRelation(lambda a, b: True, 2000, 2000)
        inst = CspInstance(g, (2000, 2000), {(0, 1): rel})
        with pytest.raises(BudgetError):
            csp_to_json(inst)
