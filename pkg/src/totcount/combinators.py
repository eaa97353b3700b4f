"""Machine transformations with exact counting contracts.

Each combinator wraps its operands' trees and guarantees a stated identity
between the operand censuses and the output census: path-count arithmetic
(subtract one, add, multiply), accept-count doubling, residue-preserving
reject expansion, and the gap decompositions built from those pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import EvaluationError, ParameterError
from .machines import (
    ACCEPT,
    REJECT,
    Machine,
    Node,
    internal,
    is_deterministic_subtree,
    leaf,
    normalize_perfect,
    path_counts,
)


def _removal_plan(root: Node, depth_limit: int) -> tuple[int, int] | None:
    """Locate the first droppable single-path successor along the leftmost path.

    Walks the leftmost path from the root; at each branching node the
    successors are scanned left to right for one whose subtree is a single
    path. Returns (depth of the branching node, successor index), or None
    when the whole tree is a single path. On a branching tree a match
    always exists: the deepest branching node on the leftmost path has a
    single-path leftmost successor.
    """
    node = root
    depth = 0
    saw_branching = False
    while node.verdict is None:
        kids = node.successors()
        if not kids:
            raise EvaluationError("internal node without successors on the leftmost path")
        if depth >= depth_limit:
            raise EvaluationError(
                f"depth bound {depth_limit} exceeded on the leftmost path")
        if len(kids) > 1:
            saw_branching = True
            for index, child in enumerate(kids):
                if is_deterministic_subtree(child, depth_limit - depth - 1):
                    return depth, index
        node = kids[0]
        depth += 1
    if saw_branching:
        raise EvaluationError("no droppable single-path successor found")
    return None


def _drop_successor(node: Node, target_depth: int, drop_index: int, depth: int = 0) -> Node:
    kids = node.successors()
    if depth == target_depth:
        remaining = kids[:drop_index] + kids[drop_index + 1:]
        # May leave a single successor; the node stays unary on purpose so
        # depth accounting is untouched. binarize contracts it if needed.
        return internal(remaining)
    return internal((_drop_successor(kids[0], target_depth, drop_index, depth + 1),)
                    + kids[1:])


def _subtract_one_root(root: Node, depth_limit: int) -> Node:
    plan = _removal_plan(root, depth_limit)
    if plan is None:
        return root
    return _drop_successor(root, plan[0], plan[1])


def subtract_one(machine: Machine) -> Machine:
    """Drop exactly one path when the tree has more than one.

    A single-path tree passes through unchanged. Otherwise the successor
    located by the leftmost-path scan is removed, so the path count drops
    by exactly one and the count-minus-one value becomes max(old - 1, 0).
    """
    def build(x):
        return _subtract_one_root(machine.root(x), machine.depth_bound)

    return Machine("combinator-wrapper", machine.depth_bound,
                   machine.fanout_bound, build)


def add(first: Machine, second: Machine) -> Machine:
    """Machine whose count-minus-one is the sum of the operands'.

    If either operand runs a single path (its value is zero) the result
    behaves as the other operand; otherwise the root branches into
    subtract_one(first) and second, giving one more path than the sum.
    """
    bound = 1 + max(first.depth_bound, second.depth_bound)
    fanout = max(2, first.fanout_bound, second.fanout_bound)

    def build(x):
        fr = first.root(x)
        if is_deterministic_subtree(fr, first.depth_bound):
            return second.root(x)
        sr = second.root(x)
        if is_deterministic_subtree(sr, second.depth_bound):
            return fr
        reduced = _subtract_one_root(fr, first.depth_bound)
        return internal((reduced, sr))

    return Machine("combinator-wrapper", bound, fanout, build)


def seq(first: Machine, second: Machine) -> Machine:
    """Replace every leaf of `first` with the tree of `second`.

    The total path count is the product of the operands' totals; a
    composed leaf accepts iff both the replaced leaf and the second
    machine's leaf accept.
    """
    bound = first.depth_bound + second.depth_bound + 1
    fanout = max(1, first.fanout_bound, second.fanout_bound)

    def build(x):
        return _seq_root(first.root(x), second.root(x))

    return Machine("combinator-wrapper", bound, fanout, build)


def _seq_root(aroot: Node, broot: Node) -> Node:
    # Leaves of the first tree conjoin their verdict with the second tree's
    # leaves, so only two variants of the second tree are ever needed: the
    # tree itself (under accepting leaves) and an all-rejected copy.
    rejected = _all_rejected(broot)

    def graft(node: Node) -> Node:
        if node.verdict is None:
            return internal(lambda: tuple(graft(k) for k in node.successors()))
        return broot if node.verdict else rejected

    return graft(aroot)


def _all_rejected(node: Node) -> Node:
    if node.verdict is None:
        return internal(lambda: tuple(_all_rejected(k) for k in node.successors()))
    return leaf(REJECT) if node.verdict else node


def multiply(first: Machine, second: Machine) -> Machine:
    """Machine whose count-minus-one is the product of the operands'.

    A single-path operand annihilates: the result is a single path. In the
    general case the root branches into a rejecting dummy leaf at index 0
    and the sequential composition of both reduced operands.
    """
    bound = first.depth_bound + second.depth_bound + 1
    fanout = max(2, first.fanout_bound, second.fanout_bound)

    def build(x):
        fr = first.root(x)
        if is_deterministic_subtree(fr, first.depth_bound):
            return leaf(REJECT)
        sr = second.root(x)
        if is_deterministic_subtree(sr, second.depth_bound):
            return leaf(REJECT)
        reduced_first = _subtract_one_root(fr, first.depth_bound)
        reduced_second = _subtract_one_root(sr, second.depth_bound)
        return internal((leaf(REJECT), _seq_root(reduced_first, reduced_second)))

    return Machine("combinator-wrapper", bound, fanout, build)


def double_accepting(machine: Machine) -> Machine:
    """Split every accepting leaf into a branch over two accepting leaves.

    The accepting count doubles, the rejecting count is unchanged, and the
    count-minus-one value grows by exactly the operand's accepting count.
    """
    def dup(node: Node) -> Node:
        if node.verdict is None:
            return internal(lambda: tuple(dup(k) for k in node.successors()))
        if node.verdict:
            return internal((leaf(ACCEPT), leaf(ACCEPT)))
        return node

    return Machine("combinator-wrapper", machine.depth_bound + 1,
                   max(2, machine.fanout_bound),
                   lambda x: dup(machine.root(x)))


def mark_leftmost_reject(machine: Machine) -> Machine:
    """Keep the tree shape; reject the leftmost leaf and accept all others.

    The accepting count of the result equals the operand's count-minus-one.
    """
    def mark(node: Node, leftmost: bool) -> Node:
        if node.verdict is None:
            def kids():
                return tuple(mark(k, leftmost and i == 0)
                             for i, k in enumerate(node.successors()))
            return internal(kids)
        return leaf(REJECT if leftmost else ACCEPT)

    return Machine("combinator-wrapper", machine.depth_bound,
                   machine.fanout_bound,
                   lambda x: mark(machine.root(x), True))


def acc_to_tot_modk(machine: Machine, k: int) -> Machine:
    """Expand every rejecting leaf into `k` rejecting leaves and add a dummy path.

    The result has acc + k*rej + 1 paths, so its count-minus-one is
    congruent to the operand's accepting count modulo k, residue included.
    """
    if k < 2:
        raise ParameterError("k must be at least 2")

    def spread(node: Node) -> Node:
        if node.verdict is None:
            return internal(lambda: tuple(spread(c) for c in node.successors()))
        if node.verdict:
            return node
        return internal(tuple(leaf(REJECT) for _ in range(k)))

    def build(x):
        # Dummy rejecting path at successor index 0.
        return internal((leaf(REJECT), spread(machine.root(x))))

    # Both the dummy root level and the reject expansion deepen the tree.
    return Machine("combinator-wrapper", machine.depth_bound + 2,
                   max(k, 2, machine.fanout_bound), build)


@dataclass(frozen=True)
class GapPair:
    """Two machines whose count-minus-one difference realizes an integer function."""

    plus: Machine
    minus: Machine

    def value(self, x: Any = None) -> int:
        return path_counts(self.plus, x).tot - path_counts(self.minus, x).tot


def gap_decompose(first: Machine, second: Machine) -> GapPair:
    """GapPair whose value equals acc(first) - acc(second) on every input."""
    return GapPair(plus=add(double_accepting(first), second),
                   minus=add(first, double_accepting(second)))


def normalize_gap_offset(gval: int, machine: Machine, p: int) -> tuple[int, Machine]:
    """Rewrite gval - acc(machine) as g' - tot(M') with M' over a perfect tree.

    Returns (gval + 2**p - 1, double_accepting(normalize_perfect(machine, p)));
    the difference gval - acc(machine) equals g' - tot(M') whenever the
    normalization precondition holds. Normalization errors surface when the
    returned machine is evaluated.
    """
    shifted = gval + (1 << p) - 1
    return shifted, double_accepting(normalize_perfect(machine, p))
