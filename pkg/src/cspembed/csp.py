"""Binary CSP data model, brute-force solve/count oracles, and instance generators.

An instance is a constraint graph, a per-vertex alphabet size, and one
binary relation per edge. Relations are stored oriented as
(value at the lower endpoint, value at the higher endpoint) and are either
explicit pair sets or intensional predicates. Assignments are plain tuples
indexed by vertex.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .config import DEFAULT_CONFIG
from .errors import BudgetError, InputError
from .graphs import Edge, Graph

Assignment = tuple[int, ...]


class Relation:
    """Binary relation over the alphabets of an edge's endpoints.

    ``accepts(a, b)`` takes the value at the lower-id endpoint first.
    """

    def accepts(self, a: int, b: int) -> bool:
        raise NotImplementedError

    def materialize(self, size_a: int, size_b: int, budget: int) -> "ExplicitRelation":
        if size_a * size_b > budget:
            raise BudgetError(
                f"refusing to materialize a relation over {size_a}x{size_b} pairs "
                f"(budget {budget})"
            )
        return ExplicitRelation(
            frozenset(
                (a, b)
                for a in range(size_a)
                for b in range(size_b)
                if self.accepts(a, b)
            )
        )


@dataclass(frozen=True)
class ExplicitRelation(Relation):
    pairs: frozenset[tuple[int, int]]

    def accepts(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs


@dataclass(frozen=True)
class IntensionalRelation(Relation):
    """Pure predicate over value pairs, with declared endpoint alphabet sizes."""

    fn: Callable[[int, int], bool]
    size_a: int
    size_b: int

    def accepts(self, a: int, b: int) -> bool:
        return self.fn(a, b)


def equality_relation(size: int) -> ExplicitRelation:
    return ExplicitRelation(frozenset((a, a) for a in range(size)))


def inequality_relation(size: int) -> ExplicitRelation:
    return ExplicitRelation(
        frozenset((a, b) for a in range(size) for b in range(size) if a != b)
    )


def full_relation(size_a: int, size_b: int) -> ExplicitRelation:
    return ExplicitRelation(
        frozenset((a, b) for a in range(size_a) for b in range(size_b))
    )


def adjacency_relation(g: Graph) -> ExplicitRelation:
    pairs = set()
    for u, v in g.edges:
        pairs.add((u, v))
        pairs.add((v, u))
    return ExplicitRelation(frozenset(pairs))


@dataclass(frozen=True)
class CspInstance:
    graph: Graph
    alphabet_sizes: tuple[int, ...]
    constraints: dict[Edge, Relation]

    def __post_init__(self):
        if len(self.alphabet_sizes) != self.graph.n:
            raise InputError("alphabet sizes must cover every vertex")
        if any(s < 1 for s in self.alphabet_sizes):
            raise InputError("alphabet sizes must be positive")
        if set(self.constraints) != set(self.graph.edges):
            raise InputError("constraints must cover exactly the edges")
        for (u, v), rel in self.constraints.items():
            su, sv = self.alphabet_sizes[u], self.alphabet_sizes[v]
            if isinstance(rel, ExplicitRelation):
                for a, b in rel.pairs:
                    if not (0 <= a < su and 0 <= b < sv):
                        raise InputError(
                            f"pair ({a},{b}) outside alphabets at edge ({u},{v})"
                        )
            elif isinstance(rel, IntensionalRelation):
                if (rel.size_a, rel.size_b) != (su, sv):
                    raise InputError(
                        f"declared relation sizes at edge ({u},{v}) do not match"
                    )

    @property
    def uniform_alphabet(self) -> Optional[int]:
        sizes = set(self.alphabet_sizes)
        return sizes.pop() if len(sizes) == 1 else None

    def assignment_space(self) -> int:
        return math.prod(self.alphabet_sizes)


def is_satisfied(inst: CspInstance, a: Assignment) -> bool:
    """True iff every constraint contains its endpoint value pair."""
    if len(a) != inst.graph.n:
        raise InputError("assignment must be total")
    for v, val in enumerate(a):
        if not 0 <= val < inst.alphabet_sizes[v]:
            raise InputError(f"value {val} at vertex {v} is out of range")
    return all(
        rel.accepts(a[u], a[v]) for (u, v), rel in inst.constraints.items()
    )


def _search_order(inst: CspInstance, head: list[int]) -> list[int]:
    # BFS from the head so that (within a component) every vertex is
    # constrained by an earlier one; remaining components rooted at their
    # smallest vertex.
    order = list(head)
    placed = set(order)
    queue = list(order)
    roots = iter(range(inst.graph.n))
    while len(order) < inst.graph.n:
        if not queue:
            root = next(r for r in roots if r not in placed)
            placed.add(root)
            order.append(root)
            queue.append(root)
            continue
        u = queue.pop(0)
        for w in inst.graph.adjacency[u]:
            if w not in placed:
                placed.add(w)
                order.append(w)
                queue.append(w)
    return order


def _check_budget(inst: CspInstance, budget: Optional[int]) -> None:
    if budget is not None and inst.assignment_space() > budget:
        raise BudgetError(
            f"assignment space {inst.assignment_space()} exceeds budget {budget}"
        )


def iter_solutions(
    inst: CspInstance,
    budget: Optional[int] = DEFAULT_CONFIG.solver_budget,
    fixed: Optional[dict[int, int]] = None,
    first_vertex: Optional[int] = None,
) -> Iterator[Assignment]:
    """Backtracking enumeration of all satisfying assignments.

    The search order is connectivity-aware for pruning; the set of yielded
    solutions does not depend on it. ``fixed`` pins values, ``first_vertex``
    forces one vertex to branch first (its values ascending).
    """
    _check_budget(inst, budget)
    fixed = fixed or {}
    for v, val in fixed.items():
        if not 0 <= val < inst.alphabet_sizes[v]:
            raise InputError(f"fixed value {val} at vertex {v} is out of range")
    head = sorted(fixed)
    if first_vertex is not None and first_vertex not in fixed:
        head.append(first_vertex)
    order = _search_order(inst, head)
    n = inst.graph.n
    pos = {v: i for i, v in enumerate(order)}
    # per position: constraints to vertices placed earlier
    checks: list[list[tuple[int, Relation, bool]]] = [[] for _ in range(n)]
    for (u, v), rel in inst.constraints.items():
        a, b = (u, v) if pos[u] < pos[v] else (v, u)
        # a is placed before b; record whether b is the lower endpoint
        checks[pos[b]].append((a, rel, b < a))
    values = [0] * n

    def consistent(i: int, val: int) -> bool:
        v = order[i]
        for other, rel, v_is_lower in checks[i]:
            o = values[other]
            if not (rel.accepts(val, o) if v_is_lower else rel.accepts(o, val)):
                return False
        return True

    def rec(i: int) -> Iterator[Assignment]:
        if i == n:
            yield tuple(values)
            return
        v = order[i]
        domain = (fixed[v],) if v in fixed else range(inst.alphabet_sizes[v])
        for val in domain:
            if consistent(i, val):
                values[v] = val
                yield from rec(i + 1)

    return rec(0)


def solve_bruteforce(
    inst: CspInstance, budget: Optional[int] = DEFAULT_CONFIG.solver_budget
) -> Optional[Assignment]:
    """Lexicographically first satisfying assignment (vertex-id order), or None."""
    if next(iter_solutions(inst, budget), None) is None:
        return None
    fixed: dict[int, int] = {}
    for v in range(inst.graph.n):
        sol = next(iter_solutions(inst, budget, fixed=fixed, first_vertex=v))
        fixed[v] = sol[v]
    return tuple(fixed[v] for v in range(inst.graph.n))


def count_satisfying(
    inst: CspInstance, budget: Optional[int] = DEFAULT_CONFIG.solver_budget
) -> int:
    """Exact number of satisfying assignments."""
    return sum(1 for _ in iter_solutions(inst, budget))


def coloring_instance(g: Graph, q: int) -> CspInstance:
    """Proper q-coloring as a CSP: every edge carries the inequality relation."""
    if q < 1:
        raise InputError("need at least one color")
    rel = inequality_relation(q)
    return CspInstance(g, (q,) * g.n, {e: rel for e in g.edges})


def _pad_to_degree(g: Graph, target: int, step_cap: int = 200_000) -> list[Edge]:
    """Extra simple edges raising every degree to the target, by backtracking.

    Lowest-deficient-vertex-first search, partners in deficiency order;
    refuses if no simple padding exists (or the search cap is hit).
    """
    deficiency = [target - d for d in g.degrees()]
    if any(d < 0 for d in deficiency):
        raise InputError(f"padding requires maximum degree at most {target}")
    used = set(g.edges)
    placed: list[Edge] = []
    steps = 0

    def rec() -> bool:
        nonlocal steps
        steps += 1
        if steps > step_cap:
            raise BudgetError("padding search exceeded its step cap")
        u = next((v for v in range(g.n) if deficiency[v] > 0), None)
        if u is None:
            return True
        partners = sorted(
            (w for w in range(g.n) if w != u and deficiency[w] > 0),
            key=lambda w: (-deficiency[w], w),
        )
        for w in partners:
            e = (u, w) if u < w else (w, u)
            if e in used:
                continue
            used.add(e)
            placed.append(e)
            deficiency[u] -= 1
            deficiency[w] -= 1
            if rec():
                return True
            deficiency[u] += 1
            deficiency[w] += 1
            placed.pop()
            used.discard(e)
        return False

    if sum(deficiency) % 2 == 1 or not rec():
        raise InputError(f"cannot pad to {target}-regular without parallel edges")
    return placed


def four_regular_coloring_instance(g: Graph, q: int) -> CspInstance:
    """Coloring instance padded to a 4-regular constraint graph.

    Vertices of degree < 4 are paired by dummy all-accepting constraints;
    satisfiability is unchanged by construction. Refuses when no simple
    padding exists.
    """
    dummies = _pad_to_degree(g, 4)
    padded = Graph(g.n, frozenset(set(g.edges) | set(dummies)))
    ineq = inequality_relation(q)
    full = full_relation(q, q)
    constraints: dict[Edge, Relation] = {e: ineq for e in g.edges}
    constraints.update({e: full for e in dummies})
    return CspInstance(padded, (q,) * g.n, constraints)


def clique_instance(g: Graph, k: int) -> CspInstance:
    """Satisfiable iff g has a k-clique: k variables over alphabet V(g),
    complete constraint graph, every constraint the adjacency relation."""
    if k < 2:
        raise InputError("need at least two clique variables")
    if g.n < 1:
        raise InputError("target graph must be nonempty")
    complete = Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])
    rel = adjacency_relation(g)
    return CspInstance(complete, (g.n,) * k, {e: rel for e in complete.edges})


def regularize(inst: CspInstance) -> CspInstance:
    """Rewrite onto a 3-regular constraint graph via copy cycles of equality.

    A variable of degree c becomes max(c, 3) copies joined in an equality
    cycle, each original constraint landing on one copy per endpoint.
    Copies short of degree 3 are paired across the instance by dummy
    all-accepting constraints (cycle lengths grow by parity/pairing needs).
    Satisfiability and the exact solution count are preserved.
    """
    s = inst.uniform_alphabet
    if s is None:
        raise InputError("regularization requires a uniform alphabet")
    degs = inst.graph.degrees()
    if any(d == 0 for d in degs):
        raise InputError("regularization requires minimum degree 1")
    n = inst.graph.n
    reps = [max(d, 3) for d in degs]
    if sum(r - d for r, d in zip(reps, degs)) % 2 == 1:
        bump = next(v for v in range(n) if degs[v] < 3)
        reps[bump] += 1

    eq = equality_relation(s)
    full = full_relation(s, s)
    for _ in range(4):
        offsets = [0] * n
        for v in range(1, n):
            offsets[v] = offsets[v - 1] + reps[v - 1]
        total = offsets[-1] + reps[-1]

        def copy_id(v: int, j: int) -> int:
            return offsets[v] + j

        edges: dict[Edge, Relation] = {}
        for v in range(n):
            for j in range(reps[v]):
                a, b = copy_id(v, j), copy_id(v, (j + 1) % reps[v])
                edges[(min(a, b), max(a, b))] = eq
        slot = [0] * n
        for eid, (u, v) in enumerate(inst.graph.edge_list):
            cu, cv = copy_id(u, slot[u]), copy_id(v, slot[v])
            slot[u] += 1
            slot[v] += 1
            # offsets are increasing, so copy order matches vertex order
            edges[(min(cu, cv), max(cu, cv))] = inst.constraints[(u, v)]
        surplus = [
            (v, copy_id(v, j)) for v in range(n) for j in range(degs[v], reps[v])
        ]
        unpaired = [c for _, c in surplus]
        owner = {c: v for v, c in surplus}
        stuck = None
        while unpaired:
            x = unpaired.pop(0)
            partner_idx = next(
                (
                    idx
                    for idx, y in enumerate(unpaired)
                    if (min(x, y), max(x, y)) not in edges
                ),
                None,
            )
            if partner_idx is None:
                stuck = owner[x]
                break
            y = unpaired.pop(partner_idx)
            edges[(min(x, y), max(x, y))] = full
        if stuck is None:
            out = CspInstance(
                Graph(total, frozenset(edges)), (s,) * total, edges
            )
            assert out.graph.is_regular(3)
            return out
        reps[stuck] += 2
    raise InputError("could not pair the surplus copies into a 3-regular graph")


def random_instance(
    n: int,
    edge_probability: float,
    alphabet_size: int,
    pair_density: float,
    seed: int,
) -> CspInstance:
    """Seeded Erdos-Renyi constraint graph with independent random relations."""
    if not (0 <= edge_probability <= 1 and 0 <= pair_density <= 1):
        raise InputError("probabilities must be in [0, 1]")
    if alphabet_size < 1 or n < 0:
        raise InputError("need a positive alphabet and nonnegative n")
    rng = random.Random(seed)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < edge_probability
    ]
    constraints: dict[Edge, Relation] = {}
    for e in edges:
        pairs = frozenset(
            (a, b)
            for a in range(alphabet_size)
            for b in range(alphabet_size)
            if rng.random() < pair_density
        )
        constraints[e] = ExplicitRelation(pairs)
    return CspInstance(Graph.from_edges(n, edges), (alphabet_size,) * n, constraints)


def csp_to_json(inst: CspInstance, materialize_budget: int = DEFAULT_CONFIG.materialize_budget) -> str:
    """Canonical JSON; intensional relations whose expansion exceeds the
    budget are an explicit error, never a silent truncation."""
    records = []
    for u, v in inst.graph.edge_list:
        rel = inst.constraints[(u, v)]
        if not isinstance(rel, ExplicitRelation):
            rel = rel.materialize(
                inst.alphabet_sizes[u], inst.alphabet_sizes[v], materialize_budget
            )
        records.append(
            {"u": u, "v": v, "pairs": [list(p) for p in sorted(rel.pairs)]}
        )
    return json.dumps(
        {
            "n": inst.graph.n,
            "alphabet_sizes": list(inst.alphabet_sizes),
            "edges": records,
        },
        separators=(",", ":"),
        sort_keys=True,
    )


def csp_from_json(s: str) -> CspInstance:
    raw = json.loads(s)
    edges = [(rec["u"], rec["v"]) for rec in raw["edges"]]
    g = Graph.from_edges(raw["n"], edges)
    constraints: dict[Edge, Relation] = {}
    for rec in raw["edges"]:
        u, v = rec["u"], rec["v"]
        if u > v:
            raise InputError("serialized edges must satisfy u < v")
        constraints[(u, v)] = ExplicitRelation(
            frozenset((a, b) for a, b in rec["pairs"])
        )
    return CspInstance(g, tuple(raw["alphabet_sizes"]), constraints)
