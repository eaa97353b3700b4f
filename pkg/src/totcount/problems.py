"""Counting problems with exact brute-force oracles and self-reductions.

Every oracle enumerates exhaustively and returns exact integers; caps keep
the enumeration at desk scale. Each problem family also ships a
self-reduction, from which `build_self_reducible_machine` produces a
machine whose path count minus one equals the instance's count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .circuits import Circuit, CircuitBuilder, restrict_first_bit
from .errors import CapacityError, ConstructionAuditError, EvaluationError, ParameterError
from .machines import ACCEPT, REJECT, Machine, Node, internal, leaf


@dataclass(frozen=True)
class Caps:
    """Enumeration limits for the brute-force oracles."""

    max_variables: int = 20
    max_vertices: int = 16
    max_scaling_exponent: int = 64


DEFAULT_CAPS = Caps()


def _caps(caps: Caps | None) -> Caps:
    return DEFAULT_CAPS if caps is None else caps


def _check_variables(n: int, caps: Caps | None, what: str) -> None:
    limit = _caps(caps).max_variables
    if n > limit:
        raise CapacityError(f"{what} has {n} variables; cap is {limit}")


def _check_vertices(n: int, caps: Caps | None) -> None:
    limit = _caps(caps).max_vertices
    if n > limit:
        raise CapacityError(f"graph has {n} vertices; cap is {limit}")


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of disjunctive clauses over variables 1..num_vars.

    Literals are signed variable indices. An empty clause list is allowed
    and is satisfied by all 2**num_vars assignments.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses",
                           tuple(tuple(int(l) for l in c) for c in self.clauses))
        _validate_literals(self.num_vars, self.clauses, "clause")


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of conjunctive terms over variables 1..num_vars.

    An empty term list has no satisfying assignment; an empty term is
    satisfied by every assignment.
    """

    num_vars: int
    terms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           tuple(tuple(int(l) for l in t) for t in self.terms))
        _validate_literals(self.num_vars, self.terms, "term")


def _validate_literals(num_vars: int, groups, what: str) -> None:
    if num_vars < 0:
        raise ParameterError("variable count must be a natural number")
    for index, group in enumerate(groups):
        for lit in group:
            if lit == 0 or abs(lit) > num_vars:
                raise ParameterError(
                    f"{what} {index}: literal {lit} outside 1..{num_vars}")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..num_vertices.

    `left_side`, when present, declares a bipartition side and every edge
    must cross it.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    left_side: frozenset[int] | None = None

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ParameterError("vertex count must be a natural number")
        seen = set()
        normalized = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.num_vertices and 1 <= v <= self.num_vertices):
                raise ParameterError(f"edge ({u},{v}) outside 1..{self.num_vertices}")
            edge = (u, v) if u < v else (v, u)
            if edge not in seen:
                seen.add(edge)
                normalized.append(edge)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        if self.left_side is not None:
            side = frozenset(int(v) for v in self.left_side)
            if not all(1 <= v <= self.num_vertices for v in side):
                raise ParameterError("bipartition side mentions unknown vertices")
            for u, v in self.edges:
                if (u in side) == (v in side):
                    raise ParameterError(
                        f"edge ({u},{v}) does not cross the declared bipartition")
            object.__setattr__(self, "left_side", side)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.num_vertices + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for neighbors in adj.values():
            neighbors.sort()
        return adj


@dataclass(frozen=True)
class SubtreeInstance:
    """Pruned binary tree: prefixes up to `depth` filtered by an aliveness circuit.

    A prefix contributes to counts only when it and all its ancestors are
    alive; the counting functions enforce that closure.
    """

    depth: int
    predicate: Circuit

    def __post_init__(self):
        if self.depth < 0:
            raise ParameterError("depth must be a natural number")
        if self.predicate.num_bits != self.depth:
            raise ParameterError(
                f"predicate reads {self.predicate.num_bits} bits but depth is {self.depth}")

    def alive(self, prefix: tuple[int, ...]) -> bool:
        return self.predicate.evaluate(prefix)


ProblemInstance = CnfFormula | DnfFormula | Graph | SubtreeInstance


# ---------------------------------------------------------------------------
# Brute-force counting oracles


def count_sat(formula: CnfFormula, caps: Caps | None = None) -> int:
    """Number of satisfying assignments, by enumeration over all 2**n masks."""
    _check_variables(formula.num_vars, caps, "cnf formula")
    n = formula.num_vars
    shaped = [_clause_masks(c) for c in formula.clauses]
    count = 0
    for mask in range(1 << n):
        for pos, neg in shaped:
            if not (mask & pos) and (mask & neg) != neg:
                break
        else:
            count += 1
    return count


def count_dnf_sat(formula: DnfFormula, caps: Caps | None = None) -> int:
    """Number of satisfying assignments, by enumeration over all 2**n masks."""
    _check_variables(formula.num_vars, caps, "dnf formula")
    n = formula.num_vars
    shaped = [_clause_masks(t) for t in formula.terms]
    count = 0
    for mask in range(1 << n):
        for pos, neg in shaped:
            if (mask & pos) == pos and not (mask & neg):
                count += 1
                break
    return count


def count_dnf_unsat(formula: DnfFormula, caps: Caps | None = None) -> int:
    """Number of falsifying assignments: 2**n minus the satisfying count."""
    return (1 << formula.num_vars) - count_dnf_sat(formula, caps)


def _clause_masks(literals: tuple[int, ...]) -> tuple[int, int]:
    pos = neg = 0
    for lit in literals:
        if lit > 0:
            pos |= 1 << (lit - 1)
        else:
            neg |= 1 << (-lit - 1)
    return pos, neg


def count_perfect_matchings(graph: Graph, caps: Caps | None = None) -> int:
    """Number of perfect matchings, by recursing over the pairings of the
    smallest uncovered vertex."""
    _check_vertices(graph.num_vertices, caps)
    n = graph.num_vertices
    adjacency = [0] * (n + 1)
    for u, v in graph.edges:
        adjacency[u] |= 1 << (v - 1)
        adjacency[v] |= 1 << (u - 1)

    def recurse(uncovered: int) -> int:
        if uncovered == 0:
            return 1
        v = (uncovered & -uncovered).bit_length()
        partners = adjacency[v] & uncovered
        total = 0
        while partners:
            low = partners & -partners
            partners ^= low
            total += recurse(uncovered ^ low ^ (1 << (v - 1)))
        return total

    return recurse((1 << n) - 1)


def count_independent_sets(graph: Graph, caps: Caps | None = None) -> int:
    """Number of independent sets of all sizes, the empty set included."""
    _check_vertices(graph.num_vertices, caps)
    edge_masks = [(1 << (u - 1)) | (1 << (v - 1)) for u, v in graph.edges]
    count = 0
    for subset in range(1 << graph.num_vertices):
        for mask in edge_masks:
            if subset & mask == mask:
                break
        else:
            count += 1
    return count


def size_of_subtree(instance: SubtreeInstance, caps: Caps | None = None) -> int:
    """Number of alive, ancestor-alive prefixes, the root included."""
    _check_variables(instance.depth, caps, "subtree instance")

    def recurse(prefix: tuple[int, ...]) -> int:
        if not instance.alive(prefix):
            return 0
        if len(prefix) == instance.depth:
            return 1
        return 1 + recurse(prefix + (0,)) + recurse(prefix + (1,))

    return recurse(())


def count_alive_leaves(instance: SubtreeInstance, caps: Caps | None = None) -> int:
    """Number of alive full-depth prefixes whose ancestors are all alive."""
    _check_variables(instance.depth, caps, "subtree instance")

    def recurse(prefix: tuple[int, ...]) -> int:
        if not instance.alive(prefix):
            return 0
        if len(prefix) == instance.depth:
            return 1
        return recurse(prefix + (0,)) + recurse(prefix + (1,))

    return recurse(())


# ---------------------------------------------------------------------------
# Decision procedures


def cnf_satisfiable(formula: CnfFormula, caps: Caps | None = None) -> bool:
    """Satisfiability by enumeration. Exponential fallback: there is no easy
    decision for cnf; use only at desk scale."""
    _check_variables(formula.num_vars, caps, "cnf formula")
    shaped = [_clause_masks(c) for c in formula.clauses]
    for mask in range(1 << formula.num_vars):
        for pos, neg in shaped:
            if not (mask & pos) and (mask & neg) != neg:
                break
        else:
            return True
    return False


def dnf_satisfiable(formula: DnfFormula) -> bool:
    """True iff some term is internally consistent."""
    for term in formula.terms:
        if not any(-lit in term for lit in term):
            return True
    return False


def has_perfect_matching(graph: Graph) -> bool:
    """Perfect-matching existence via alternating-path augmentation.

    Exact on bipartite graphs; on general graphs the search does not
    handle odd cycles and may under-report.
    """
    n = graph.num_vertices
    if n % 2 == 1:
        return False
    adjacency = graph.adjacency()
    mate: dict[int, int | None] = {v: None for v in range(1, n + 1)}

    def augment(v: int, visited: set[int]) -> bool:
        for u in adjacency[v]:
            if u in visited:
                continue
            visited.add(u)
            if mate[u] is None or augment(mate[u], visited):
                mate[u] = v
                mate[v] = u
                return True
        return False

    for v in range(1, n + 1):
        if mate[v] is None and not augment(v, {v}):
            return False
    return True


def has_independent_set(graph: Graph) -> bool:
    """Always true: the empty set is independent."""
    return True


def subtree_root_alive(instance: SubtreeInstance) -> bool:
    return instance.alive(())


def decision(instance: ProblemInstance, problem: str | None = None,
             caps: Caps | None = None) -> bool:
    """Positivity of the instance's count, without counting.

    `problem` picks the family for graphs ("perfect-matching", the default,
    or "independent-set"); the other instance kinds are unambiguous. The
    cnf case falls back to enumeration.
    """
    if isinstance(instance, CnfFormula):
        return cnf_satisfiable(instance, caps)
    if isinstance(instance, DnfFormula):
        return dnf_satisfiable(instance)
    if isinstance(instance, SubtreeInstance):
        return subtree_root_alive(instance)
    if isinstance(instance, Graph):
        name = problem or "perfect-matching"
        if name == "perfect-matching":
            return has_perfect_matching(instance)
        if name == "independent-set":
            return has_independent_set(instance)
        raise ParameterError(f"unknown graph problem {name!r}")
    raise ParameterError(f"unknown instance kind {type(instance).__name__}")


def is_bipartite(graph: Graph) -> bool:
    """Two-colorability check by depth-first search."""
    color: dict[int, int] = {}
    adjacency = graph.adjacency()
    for start in range(1, graph.num_vertices + 1):
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adjacency[v]:
                if u not in color:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return False
    return True


# ---------------------------------------------------------------------------
# Graph surgery helpers for the self-reductions


def _relabel(graph: Graph, removed: set[int]) -> Graph:
    keep = [v for v in range(1, graph.num_vertices + 1) if v not in removed]
    index = {v: i + 1 for i, v in enumerate(keep)}
    edges = tuple((index[u], index[v]) for u, v in graph.edges
                  if u not in removed and v not in removed)
    left = None
    if graph.left_side is not None:
        left = frozenset(index[v] for v in graph.left_side if v not in removed)
    return Graph(len(keep), edges, left)


def _without_edge(graph: Graph, edge: tuple[int, int]) -> Graph:
    u, v = min(edge), max(edge)
    edges = tuple(e for e in graph.edges if e != (u, v))
    return Graph(graph.num_vertices, edges, graph.left_side)


def disjoint_union(first: Graph, second: Graph) -> Graph:
    """Disjoint union; the second graph's vertices are shifted up."""
    offset = first.num_vertices
    edges = first.edges + tuple((u + offset, v + offset) for u, v in second.edges)
    left = None
    if first.left_side is not None and second.left_side is not None:
        left = first.left_side | frozenset(v + offset for v in second.left_side)
    return Graph(first.num_vertices + second.num_vertices, edges, left)


# ---------------------------------------------------------------------------
# Self-reductions and the machine builder


@dataclass(frozen=True)
class SelfReduction:
    """Recursive decomposition count(x) = offset(x) + sum_i weight(x,i) * count(child(x,i)).

    `branch_bound` is the largest child index; `decision` must hold exactly
    when the count is positive, `is_base` marks instances counted directly
    by `base_count`, `depth_bound` bounds the recursion depth per instance,
    and `count`, when present, is the independent oracle used for audits.
    `validate` may reject inadmissible root instances.
    """

    name: str
    offset: Callable[[Any], int]
    branch_bound: int
    weight: Callable[[Any, int], int]
    child: Callable[[Any, int], Any]
    decision: Callable[[Any], bool]
    is_base: Callable[[Any], bool]
    base_count: Callable[[Any], int]
    depth_bound: Callable[[Any], int]
    count: Callable[[Any], int] | None = None
    validate: Callable[[Any], None] | None = None


def build_self_reducible_machine(sr: SelfReduction, x: Any,
                                 audit: bool = False) -> Machine:
    """Machine whose path count minus one equals the instance's count.

    When the decision rejects, the tree is a single rejecting leaf.
    Otherwise the root branches into a dummy accepting leaf (index 0) and a
    search tree in which every instance y contributes offset(y) accepting
    leaves plus, for each child with positive weight and accepting
    decision, weight-many copies of that child's search tree; base
    instances contribute base_count(y) leaves. With `audit`, the search
    tree's leaf count is compared against the independent oracle.
    """
    if sr.validate is not None:
        sr.validate(x)
    if not sr.decision(x):
        node = leaf(REJECT)
        return Machine("base-problem", 0, 1, lambda _x: node)

    max_fanout = 2
    budget = sr.depth_bound(x)

    def search(y: Any, remaining: int) -> tuple[Node, int]:
        nonlocal max_fanout
        if remaining < 0:
            raise EvaluationError(
                f"self-reduction depth bound {budget} exceeded for {sr.name}")
        if sr.is_base(y):
            base = sr.base_count(y)
            if base <= 0:
                raise ConstructionAuditError(
                    f"{sr.name}: base count {base} on an instance with accepting decision")
            if base == 1:
                return leaf(ACCEPT), 1
            max_fanout = max(max_fanout, base)
            return internal(tuple(leaf(ACCEPT) for _ in range(base))), base
        children: list[Node] = []
        leaves = 0
        for _ in range(sr.offset(y)):
            children.append(leaf(ACCEPT))
            leaves += 1
        for i in range(sr.branch_bound + 1):
            w = sr.weight(y, i)
            if w <= 0:
                continue
            z = sr.child(y, i)
            if not sr.decision(z):
                continue
            node, sub_leaves = search(z, remaining - 1)
            children.extend([node] * w)
            leaves += w * sub_leaves
        if not children:
            raise ConstructionAuditError(
                f"{sr.name}: no expansion for an instance with accepting decision")
        max_fanout = max(max_fanout, len(children))
        if len(children) == 1:
            return children[0], leaves
        return internal(tuple(children)), leaves

    search_root, leaves = search(x, budget)
    if audit and sr.count is not None:
        expected = sr.count(x)
        if leaves != expected:
            raise ConstructionAuditError(
                f"{sr.name}: search tree has {leaves} leaves but the oracle counts {expected}")
    root = internal((leaf(ACCEPT), search_root))
    return Machine("base-problem", budget + 1, max_fanout, lambda _x: root)


def perfect_matching_self_reduction(caps: Caps | None = None) -> SelfReduction:
    """Branch on the smallest edge at the smallest vertex: the matchings
    containing it (index 0) and the matchings avoiding it (index 1)."""
    caps = _caps(caps)

    def smallest_edge(g: Graph) -> tuple[int, int]:
        for u, v in g.edges:
            if u == 1:
                return (u, v)
        raise EvaluationError("no edge at the smallest vertex of a decided-true instance")

    def child(g: Graph, i: int) -> Graph:
        u, v = smallest_edge(g)
        if i == 0:
            return _relabel(g, {u, v})
        return _without_edge(g, (u, v))

    def validate(g: Graph) -> None:
        _check_vertices(g.num_vertices, caps)
        if not is_bipartite(g):
            raise ParameterError(
                "the perfect-matching self-reduction is restricted to bipartite graphs")

    return SelfReduction(
        name="perfect-matching",
        offset=lambda g: 0,
        branch_bound=1,
        weight=lambda g, i: 1,
        child=child,
        decision=has_perfect_matching,
        is_base=lambda g: g.num_vertices == 0,
        base_count=lambda g: 1,
        depth_bound=lambda g: len(g.edges) + 1,
        count=lambda g: count_perfect_matchings(g, caps),
        validate=validate,
    )


def dnf_self_reduction(caps: Caps | None = None) -> SelfReduction:
    """Extend assignments variable by variable; child 0 sets x1 false."""
    caps = _caps(caps)

    def child(formula: DnfFormula, i: int) -> DnfFormula:
        return _dnf_restrict_first(formula, value=bool(i))

    return SelfReduction(
        name="dnf-sat",
        offset=lambda f: 0,
        branch_bound=1,
        weight=lambda f, i: 1,
        child=child,
        decision=dnf_satisfiable,
        is_base=lambda f: f.num_vars == 0,
        base_count=lambda f: 1 if f.terms else 0,
        depth_bound=lambda f: f.num_vars + 1,
        count=lambda f: count_dnf_sat(f, caps),
        validate=lambda f: _check_variables(f.num_vars, caps, "dnf formula"),
    )


def _dnf_restrict_first(formula: DnfFormula, value: bool) -> DnfFormula:
    terms = []
    for term in formula.terms:
        rewritten = []
        dead = False
        for lit in term:
            if abs(lit) == 1:
                if (lit > 0) != value:
                    dead = True
                    break
            else:
                rewritten.append(lit - 1 if lit > 0 else lit + 1)
        if not dead:
            terms.append(tuple(rewritten))
    return DnfFormula(formula.num_vars - 1, tuple(terms))


def independent_set_self_reduction(caps: Caps | None = None) -> SelfReduction:
    """Branch on the smallest vertex: sets containing it (index 0, closed
    neighborhood removed) and sets avoiding it (index 1)."""
    caps = _caps(caps)

    def child(g: Graph, i: int) -> Graph:
        if i == 0:
            removed = {1} | {v for u, v in g.edges if u == 1}
            return _relabel(g, removed)
        return _relabel(g, {1})

    return SelfReduction(
        name="independent-set",
        offset=lambda g: 0,
        branch_bound=1,
        weight=lambda g, i: 1,
        child=child,
        decision=has_independent_set,
        is_base=lambda g: g.num_vertices == 0,
        base_count=lambda g: 1,
        depth_bound=lambda g: g.num_vertices + 1,
        count=lambda g: count_independent_sets(g, caps),
        validate=lambda g: _check_vertices(g.num_vertices, caps),
    )


def subtree_self_reduction(caps: Caps | None = None) -> SelfReduction:
    """Count the current node, then recurse into the alive child prefixes."""
    caps = _caps(caps)

    def child(s: SubtreeInstance, i: int) -> SubtreeInstance:
        return SubtreeInstance(s.depth - 1, restrict_first_bit(s.predicate, i))

    return SelfReduction(
        name="size-of-subtree",
        offset=lambda s: 1,
        branch_bound=1,
        weight=lambda s, i: 1,
        child=child,
        decision=subtree_root_alive,
        is_base=lambda s: s.depth == 0,
        base_count=lambda s: 1,
        depth_bound=lambda s: s.depth + 1,
        count=lambda s: size_of_subtree(s, caps),
        validate=lambda s: _check_variables(s.depth, caps, "subtree instance"),
    )


SELF_REDUCTIONS: dict[str, Callable[[Caps | None], SelfReduction]] = {
    "perfect-matching": perfect_matching_self_reduction,
    "dnf-sat": dnf_self_reduction,
    "independent-set": independent_set_self_reduction,
    "size-of-subtree": subtree_self_reduction,
}
