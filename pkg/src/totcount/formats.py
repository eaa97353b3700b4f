"""Problem-file formats: DIMACS-style formulas, edge lists, circuit gate lists.

All four formats are line oriented with `c` comment lines and a `p <kind>`
header; the header decides the instance kind. Parsers reject malformed
input with line-bearing diagnostics.
"""

from __future__ import annotations

import os

from .circuits import Circuit
from .errors import ParameterError, ParseError
from .problems import CnfFormula, DnfFormula, Graph, SubtreeInstance

_GATE_ARITY = {"INPUT": 1, "CONST": 1, "NOT": 1, "AND": 2, "OR": 2}


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        yield number, line


def _header(text: str) -> tuple[int, list[str]]:
    for number, line in _content_lines(text):
        fields = line.split()
        if fields[0] != "p":
            raise ParseError(f"expected a 'p' header line, got {line!r}", line=number)
        return number, fields
    raise ParseError("empty input: no header line")


def detect_kind(text: str) -> str:
    """Instance kind named by the header: cnf, dnf, edge or circuit."""
    number, fields = _header(text)
    if len(fields) < 2 or fields[1] not in ("cnf", "dnf", "edge", "circuit"):
        raise ParseError(f"unknown problem kind in header {' '.join(fields)!r}",
                         line=number)
    return fields[1]


def _int_field(value: str, number: int, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {value!r}", line=number) from None


def _parse_formula(text: str, kind: str):
    header_line, fields = _header(text)
    if len(fields) != 4 or fields[1] != kind:
        raise ParseError(f"expected header 'p {kind} <vars> <count>'", line=header_line)
    num_vars = _int_field(fields[2], header_line, "variable count")
    declared = _int_field(fields[3], header_line, f"{kind} group count")
    groups: list[tuple[int, ...]] = []
    current: list[int] = []
    last_line = header_line
    for number, line in _content_lines(text):
        if number <= header_line:
            continue
        last_line = number
        for token in line.split():
            lit = _int_field(token, number, "literal")
            if lit == 0:
                groups.append(tuple(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"literal {lit} outside 1..{num_vars}", line=number)
            current.append(lit)
    if current:
        raise ParseError("unterminated group: missing trailing 0", line=last_line)
    if len(groups) != declared:
        raise ParseError(
            f"header declares {declared} groups but {len(groups)} were given",
            line=header_line)
    return num_vars, tuple(groups)


def parse_cnf(text: str) -> CnfFormula:
    num_vars, clauses = _parse_formula(text, "cnf")
    return CnfFormula(num_vars, clauses)


def parse_dnf(text: str) -> DnfFormula:
    num_vars, terms = _parse_formula(text, "dnf")
    return DnfFormula(num_vars, terms)


def parse_graph(text: str) -> Graph:
    header_line, fields = _header(text)
    if len(fields) != 4 or fields[1] != "edge":
        raise ParseError("expected header 'p edge <vertices> <edges>'", line=header_line)
    num_vertices = _int_field(fields[2], header_line, "vertex count")
    declared = _int_field(fields[3], header_line, "edge count")
    edges: list[tuple[int, int]] = []
    left_side: frozenset[int] | None = None
    for number, line in _content_lines(text):
        if number <= header_line:
            continue
        fields = line.split()
        if fields[0] == "b":
            if left_side is not None:
                raise ParseError("duplicate bipartition line", line=number)
            left_side = frozenset(_int_field(v, number, "vertex") for v in fields[1:])
        elif fields[0] == "e":
            if len(fields) != 3:
                raise ParseError("edge lines look like 'e <u> <v>'", line=number)
            u = _int_field(fields[1], number, "vertex")
            v = _int_field(fields[2], number, "vertex")
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", line=number)
            if not (1 <= u <= num_vertices and 1 <= v <= num_vertices):
                raise ParseError(f"edge ({u},{v}) outside 1..{num_vertices}", line=number)
            edges.append((u, v))
        else:
            raise ParseError(f"unexpected line {line!r}", line=number)
    if len(edges) != declared:
        raise ParseError(
            f"header declares {declared} edges but {len(edges)} were given",
            line=header_line)
    try:
        return Graph(num_vertices, tuple(edges), left_side)
    except ParameterError as exc:
        raise ParseError(str(exc), line=header_line) from exc


def parse_circuit(text: str) -> SubtreeInstance:
    header_line, fields = _header(text)
    if len(fields) != 4 or fields[1] != "circuit":
        raise ParseError("expected header 'p circuit <depth> <gates>'", line=header_line)
    depth = _int_field(fields[2], header_line, "depth")
    declared = _int_field(fields[3], header_line, "gate count")
    gates: list[tuple] = []
    for number, line in _content_lines(text):
        if number <= header_line:
            continue
        fields = line.split()
        op = fields[0]
        if op not in _GATE_ARITY:
            raise ParseError(f"unknown gate {op!r}", line=number)
        if len(fields) != _GATE_ARITY[op] + 1:
            raise ParseError(f"gate {op} takes {_GATE_ARITY[op]} argument(s)", line=number)
        args = tuple(_int_field(a, number, "gate argument") for a in fields[1:])
        index = len(gates)
        if op == "INPUT":
            if not 0 <= args[0] < 2 * depth:
                raise ParseError(
                    f"input index {args[0]} outside 0..{2 * depth - 1}", line=number)
        elif op == "CONST":
            if args[0] not in (0, 1):
                raise ParseError("CONST takes 0 or 1", line=number)
        else:
            for ref in args:
                if not 0 <= ref < index:
                    raise ParseError(
                        f"gate reference {ref} is not an earlier gate", line=number)
        gates.append((op,) + args)
    if len(gates) != declared:
        raise ParseError(
            f"header declares {declared} gates but {len(gates)} were given",
            line=header_line)
    try:
        return SubtreeInstance(depth, Circuit(depth, tuple(gates)))
    except ParameterError as exc:
        raise ParseError(str(exc), line=header_line) from exc


_PARSERS = {
    "cnf": parse_cnf,
    "dnf": parse_dnf,
    "edge": parse_graph,
    "circuit": parse_circuit,
}


def load_problem(text: str):
    """Parse any problem text, dispatching on the header kind."""
    return _PARSERS[detect_kind(text)](text)


def load_problem_file(path: str | os.PathLike):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read problem file {path!s}: {exc}") from exc
    return load_problem(text)


def render_cnf(formula: CnfFormula) -> str:
    return _render_formula("cnf", formula.num_vars, formula.clauses)


def render_dnf(formula: DnfFormula) -> str:
    return _render_formula("dnf", formula.num_vars, formula.terms)


def _render_formula(kind: str, num_vars: int, groups) -> str:
    lines = [f"p {kind} {num_vars} {len(groups)}"]
    lines.extend(" ".join(str(lit) for lit in group) + " 0" if group else "0"
                 for group in groups)
    return "\n".join(lines) + "\n"


def render_graph(graph: Graph) -> str:
    lines = [f"p edge {graph.num_vertices} {len(graph.edges)}"]
    if graph.left_side is not None:
        lines.append("b " + " ".join(str(v) for v in sorted(graph.left_side)))
    lines.extend(f"e {u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def render_circuit(instance: SubtreeInstance) -> str:
    gates = instance.predicate.gates
    lines = [f"p circuit {instance.depth} {len(gates)}"]
    lines.extend(" ".join(str(part) for part in gate) for gate in gates)
    return "\n".join(lines) + "\n"


def render_instance(instance) -> str:
    """Serialize any problem instance in its owning text format."""
    if isinstance(instance, CnfFormula):
        return render_cnf(instance)
    if isinstance(instance, DnfFormula):
        return render_dnf(instance)
    if isinstance(instance, Graph):
        return render_graph(instance)
    if isinstance(instance, SubtreeInstance):
        return render_circuit(instance)
    raise ParameterError(f"unknown instance kind {type(instance).__name__}")
