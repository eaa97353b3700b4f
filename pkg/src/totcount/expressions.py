"""Machine expression text format.

Grammar (whitespace insensitive)::

    expr := LEAF(A|R) | BR(expr, expr, ...) | SUB1(expr) | ADD(expr, expr)
          | MUL(expr, expr) | SEQ(expr, expr) | DBLACC(expr) | MODK(expr, <k>)
          | MARKLM(expr) | NORM(expr, <p>) | PROB(<problem-file-ref>)

Expressions parse to plain tuples mirroring the heads and build into
machines. PROB loads a problem file (path relative to `base_dir`) and
wraps it in the self-reduction machine of its kind: edge lists with a
declared bipartition become perfect-matching machines, plain edge lists
independent-set machines, dnf and circuit files their own families.
cnf files are rejected: satisfiability has no easy decision.
"""

from __future__ import annotations

import os
from typing import Any

from . import combinators, formats, machines, problems
from .errors import ParseError

Ast = tuple

_UNARY = {"SUB1", "DBLACC", "MARKLM"}
_BINARY = {"ADD", "MUL", "SEQ"}
KNOWN_HEADS = _UNARY | _BINARY | {"LEAF", "BR", "MODK", "NORM", "PROB"}


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def location(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def error(self, message: str, pos: int | None = None) -> ParseError:
        line, column = self.location(pos)
        return ParseError(message, line=line, column=column)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def expect(self, char: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise self.error(f"expected {char!r}, found {found!r}")
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def name(self) -> tuple[str, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start:self.pos], start

    def integer(self) -> tuple[int, int]:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            raise self.error("expected an integer")
        return int(self.text[start:self.pos]), start

    def raw_until_rparen(self) -> tuple[str, int]:
        start = self.pos
        end = self.text.find(")", self.pos)
        if end < 0:
            raise self.error("unterminated PROB reference: missing ')'")
        raw = self.text[start:end].strip()
        self.pos = end
        if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "'\"":
            raw = raw[1:-1].strip()
        if not raw:
            raise self.error("empty problem-file reference", pos=start)
        return raw, start


def parse_expression(text: str) -> Ast:
    """Parse one expression; trailing input is an error."""
    cursor = _Cursor(text)
    ast = _parse(cursor)
    if not cursor.at_end():
        raise cursor.error("unexpected trailing input after the expression")
    return ast


def _parse(cursor: _Cursor) -> Ast:
    head, head_pos = cursor.name()
    if head not in KNOWN_HEADS:
        raise cursor.error(f"unknown machine head {head!r}", pos=head_pos)
    cursor.expect("(")
    if head == "LEAF":
        verdict, pos = cursor.name()
        if verdict not in ("A", "R"):
            raise cursor.error("LEAF takes A or R", pos=pos)
        cursor.expect(")")
        return ("LEAF", verdict == "A")
    if head == "BR":
        operands = [_parse(cursor)]
        while cursor.peek() == ",":
            cursor.expect(",")
            operands.append(_parse(cursor))
        if len(operands) < 2:
            raise cursor.error("BR takes at least two operands")
        cursor.expect(")")
        return ("BR", tuple(operands))
    if head in _UNARY:
        operand = _parse(cursor)
        cursor.expect(")")
        return (head, operand)
    if head in _BINARY:
        first = _parse(cursor)
        cursor.expect(",")
        second = _parse(cursor)
        cursor.expect(")")
        return (head, first, second)
    if head == "MODK":
        operand = _parse(cursor)
        cursor.expect(",")
        k, pos = cursor.integer()
        if k < 2:
            raise cursor.error("MODK takes k >= 2", pos=pos)
        cursor.expect(")")
        return ("MODK", operand, k)
    if head == "NORM":
        operand = _parse(cursor)
        cursor.expect(",")
        p, pos = cursor.integer()
        if p < 0:
            raise cursor.error("NORM takes p >= 0", pos=pos)
        cursor.expect(")")
        return ("NORM", operand, p)
    # PROB
    cursor.skip_ws()
    reference, _ = cursor.raw_until_rparen()
    cursor.expect(")")
    return ("PROB", reference)


def render_expression(ast: Ast) -> str:
    head = ast[0]
    if head == "LEAF":
        return f"LEAF({'A' if ast[1] else 'R'})"
    if head == "BR":
        return "BR(" + ",".join(render_expression(a) for a in ast[1]) + ")"
    if head in _UNARY:
        return f"{head}({render_expression(ast[1])})"
    if head in _BINARY:
        return f"{head}({render_expression(ast[1])},{render_expression(ast[2])})"
    if head in ("MODK", "NORM"):
        return f"{head}({render_expression(ast[1])},{ast[2]})"
    return f"PROB({ast[1]})"


def build_machine(ast: Ast, base_dir: str | os.PathLike | None = None,
                  caps: problems.Caps | None = None) -> machines.Machine:
    head = ast[0]
    if head == "LEAF":
        return machines.leaf_machine(ast[1])
    if head == "BR":
        return machines.branch_machine(
            *(build_machine(a, base_dir, caps) for a in ast[1]))
    if head == "SUB1":
        return combinators.subtract_one(build_machine(ast[1], base_dir, caps))
    if head == "DBLACC":
        return combinators.double_accepting(build_machine(ast[1], base_dir, caps))
    if head == "MARKLM":
        return combinators.mark_leftmost_reject(build_machine(ast[1], base_dir, caps))
    if head == "ADD":
        return combinators.add(build_machine(ast[1], base_dir, caps),
                               build_machine(ast[2], base_dir, caps))
    if head == "MUL":
        return combinators.multiply(build_machine(ast[1], base_dir, caps),
                                    build_machine(ast[2], base_dir, caps))
    if head == "SEQ":
        return combinators.seq(build_machine(ast[1], base_dir, caps),
                               build_machine(ast[2], base_dir, caps))
    if head == "MODK":
        return combinators.acc_to_tot_modk(build_machine(ast[1], base_dir, caps), ast[2])
    if head == "NORM":
        return machines.normalize_perfect(build_machine(ast[1], base_dir, caps), ast[2])
    return _machine_for_reference(ast[1], base_dir, caps)


def _machine_for_reference(reference: str, base_dir, caps) -> machines.Machine:
    path = reference
    if base_dir is not None and not os.path.isabs(path):
        path = os.path.join(os.fspath(base_dir), path)
    instance = formats.load_problem_file(path)
    return machine_for_instance(instance, caps)


def machine_for_instance(instance, caps: problems.Caps | None = None) -> machines.Machine:
    """Self-reduction machine of the instance's problem family."""
    if isinstance(instance, problems.Graph):
        if instance.left_side is not None:
            sr = problems.perfect_matching_self_reduction(caps)
        else:
            sr = problems.independent_set_self_reduction(caps)
    elif isinstance(instance, problems.DnfFormula):
        sr = problems.dnf_self_reduction(caps)
    elif isinstance(instance, problems.SubtreeInstance):
        sr = problems.subtree_self_reduction(caps)
    elif isinstance(instance, problems.CnfFormula):
        raise ParseError("PROB does not support cnf instances: "
                         "satisfiability has no easy decision")
    else:
        raise ParseError(f"unknown instance kind {type(instance).__name__}")
    return problems.build_self_reducible_machine(sr, instance)


def machine_from_text(text: str, base_dir: str | os.PathLike | None = None,
                      caps: problems.Caps | None = None) -> machines.Machine:
    """Parse and build in one step."""
    return build_machine(parse_expression(text), base_dir, caps)
