"""Seeded corpora: random machine expressions and problem instances.

Everything here is a pure function of the seed, so a corpus regenerated
from the same configuration is identical, entry for entry.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import expressions
from .circuits import CircuitBuilder
from .errors import ParameterError
from .machines import Machine
from .problems import CnfFormula, DnfFormula, Graph, SubtreeInstance

_LEAF_PROBABILITY = 0.5
_WRAP_PROBABILITY = 0.4
_SECOND_WRAP_PROBABILITY = 0.15
_WRAPPERS = ("SUB1", "DBLACC", "MARKLM", "MODK")

RECIPES = ("plain", "wrapped")


@dataclass(frozen=True)
class CorpusConfig:
    seed: int = 0
    count: int = 100
    max_depth: int = 6
    max_fanout: int = 3
    recipe: str = "plain"

    def __post_init__(self):
        if self.count < 0 or self.max_depth < 0:
            raise ParameterError("count and max_depth must be natural numbers")
        if self.max_fanout < 2:
            raise ParameterError("max_fanout must be at least 2")
        if self.recipe not in RECIPES:
            raise ParameterError(f"unknown recipe {self.recipe!r}")


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    text: str
    machine: Machine


def generate_corpus(config: CorpusConfig) -> list[CorpusEntry]:
    rng = random.Random(config.seed)
    entries = []
    for index in range(config.count):
        ast = _random_tree(rng, config.max_depth, config.max_fanout)
        if config.recipe == "wrapped":
            ast = _maybe_wrap(rng, ast)
        text = expressions.render_expression(ast)
        entries.append(CorpusEntry(index, text, expressions.build_machine(ast)))
    return entries


def _random_tree(rng: random.Random, depth_left: int, max_fanout: int):
    if depth_left == 0 or rng.random() < _LEAF_PROBABILITY:
        return ("LEAF", rng.random() < 0.5)
    width = rng.randint(2, max_fanout)
    return ("BR", tuple(_random_tree(rng, depth_left - 1, max_fanout)
                        for _ in range(width)))


def _maybe_wrap(rng: random.Random, ast):
    wraps = 0
    if rng.random() < _WRAP_PROBABILITY:
        wraps = 2 if rng.random() < _SECOND_WRAP_PROBABILITY else 1
    for _ in range(wraps):
        head = rng.choice(_WRAPPERS)
        if head == "MODK":
            ast = ("MODK", ast, rng.randint(2, 7))
        else:
            ast = (head, ast)
    return ast


# ---------------------------------------------------------------------------
# Random problem instances


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int,
               max_clause_len: int = 3) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        width = rng.randint(1, max(1, min(max_clause_len, num_vars)))
        variables = rng.sample(range(1, num_vars + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return CnfFormula(num_vars, tuple(clauses))


def random_dnf(rng: random.Random, num_vars: int, num_terms: int,
               max_term_len: int = 3) -> DnfFormula:
    terms = []
    for _ in range(num_terms):
        width = rng.randint(1, max(1, min(max_term_len, num_vars)))
        variables = rng.sample(range(1, num_vars + 1), width)
        terms.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
    return DnfFormula(num_vars, tuple(terms))


def random_bipartite_graph(rng: random.Random, left: int, right: int,
                           edge_probability: float = 0.5) -> Graph:
    """Random subgraph of the complete bipartite graph, sides declared."""
    edges = [(u, left + v)
             for u in range(1, left + 1)
             for v in range(1, right + 1)
             if rng.random() < edge_probability]
    return Graph(left + right, tuple(edges), frozenset(range(1, left + 1)))


def random_graph(rng: random.Random, num_vertices: int,
                 edge_probability: float = 0.5) -> Graph:
    edges = [(u, v)
             for u in range(1, num_vertices + 1)
             for v in range(u + 1, num_vertices + 1)
             if rng.random() < edge_probability]
    return Graph(num_vertices, tuple(edges))


def random_subtree_instance(rng: random.Random, depth: int,
                            extra_gates: int = 8) -> SubtreeInstance:
    """Random monotone-ish aliveness circuit over bits and length inputs."""
    builder = CircuitBuilder(depth)
    ids = [builder.const(1)]
    for i in range(depth):
        ids.append(builder.bit(i))
        ids.append(builder.longer_than(i))
    for _ in range(extra_gates):
        op = rng.choice(("NOT", "AND", "OR"))
        if op == "NOT":
            ids.append(builder.not_(rng.choice(ids)))
        elif op == "AND":
            ids.append(builder.and_(rng.choice(ids), rng.choice(ids)))
        else:
            ids.append(builder.or_(rng.choice(ids), rng.choice(ids)))
    # Bias toward alive roots so the instances are not mostly empty.
    builder.or_(ids[-1], builder.not_(builder.longer_than(0)) if depth else builder.const(1))
    return SubtreeInstance(depth, builder.build())


# ---------------------------------------------------------------------------
# Small named graphs


def cycle_graph(n: int, bipartite_sides: bool = False) -> Graph:
    edges = tuple((i, i + 1) for i in range(1, n)) + ((n, 1),) if n >= 3 else ()
    left = frozenset(range(1, n + 1, 2)) if bipartite_sides and n % 2 == 0 else None
    return Graph(n, edges, left)


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((u, v) for u in range(1, n + 1)
                          for v in range(u + 1, n + 1)))


def complete_bipartite(left: int, right: int) -> Graph:
    edges = tuple((u, left + v) for u in range(1, left + 1)
                  for v in range(1, right + 1))
    return Graph(left + right, edges, frozenset(range(1, left + 1)))


def edgeless_graph(n: int) -> Graph:
    return Graph(n, ())


def matching_graph(pairs: int) -> Graph:
    """Disjoint edges; exactly one perfect matching."""
    return Graph(2 * pairs, tuple((2 * i + 1, 2 * i + 2) for i in range(pairs)))
