"""Bounded-depth computation trees with exact path counting.

A machine generates, per input, a finite ordered tree whose leaves carry
accept/reject verdicts. Everything downstream only ever looks at the tree
shape and the leaf verdicts, so machines are realized as lazy tree
generators. All counters are plain Python integers and therefore exact at
any size; every traversal enforces the machine's declared depth bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator, Sequence

from .errors import EvaluationError, NormalizationError, ParameterError

ACCEPT = True
REJECT = False


class Node:
    """One configuration of a computation tree.

    Leaves carry a verdict (True accepts, False rejects) and have no
    successors. Internal nodes have an ordered, non-empty successor tuple,
    produced lazily and cached; successor index 0 is the leftmost
    continuation. Nodes are never mutated after the cache fills, so sharing
    a node between several trees is safe.
    """

    __slots__ = ("verdict", "_thunk", "_kids")

    def __init__(self, verdict, thunk, kids):
        self.verdict = verdict
        self._thunk = thunk
        self._kids = kids

    def successors(self) -> tuple["Node", ...]:
        kids = self._kids
        if kids is None:
            kids = tuple(self._thunk())
            self._kids = kids
            self._thunk = None
        return kids

    def __repr__(self) -> str:
        if self.verdict is None:
            return "Node(internal)"
        return f"Node({'accept' if self.verdict else 'reject'})"


def leaf(verdict: bool) -> Node:
    return Node(bool(verdict), None, ())


def internal(children: Sequence[Node] | Callable[[], Sequence[Node]]) -> Node:
    """Internal node over eager children or a thunk producing them."""
    if callable(children):
        return Node(None, children, None)
    kids = tuple(children)
    if not kids:
        raise ParameterError("an internal node needs at least one successor")
    return Node(None, None, kids)


class Machine:
    """Tree generator with a declared depth bound.

    `kind` is one of "leaf", "branch", "base-problem" or
    "combinator-wrapper". `depth_bound` is the maximum leaf depth over all
    admissible inputs (the root sits at depth 0) and `fanout_bound` bounds
    the successor count of every node; combinators compute both from their
    operands. The tree for the default input is cached, which is safe
    because generation is pure.
    """

    __slots__ = ("kind", "depth_bound", "fanout_bound", "_build", "_cached")

    def __init__(self, kind: str, depth_bound: int, fanout_bound: int,
                 build: Callable[[Any], Node]):
        if depth_bound < 0:
            raise ParameterError("depth bound must be a natural number")
        self.kind = kind
        self.depth_bound = int(depth_bound)
        self.fanout_bound = int(fanout_bound)
        self._build = build
        self._cached = None

    def root(self, x: Any = None) -> Node:
        if x is None:
            cached = self._cached
            if cached is None:
                cached = self._build(None)
                self._cached = cached
            return cached
        return self._build(x)

    def __repr__(self) -> str:
        return (f"Machine(kind={self.kind!r}, depth_bound={self.depth_bound}, "
                f"fanout_bound={self.fanout_bound})")


@dataclass(frozen=True)
class PathCounts:
    """Exact leaf census of one computation tree."""

    total: int
    accepting: int
    rejecting: int

    def __post_init__(self):
        if self.accepting + self.rejecting != self.total:
            raise ValueError("accepting + rejecting must equal total")
        if self.total < 1:
            raise ValueError("a computation tree has at least one path")

    @property
    def tot(self) -> int:
        """Path count minus the one path every tree has."""
        return self.total - 1

    @property
    def gap(self) -> int:
        """Accepting minus rejecting paths; may be negative."""
        return self.accepting - self.rejecting

    def render(self) -> str:
        return (f"total={self.total} acc={self.accepting} rej={self.rejecting} "
                f"tot={self.tot} gap={self.gap}")


def _format_path(path: Sequence[int]) -> str:
    return ".".join(str(i) for i in path) if path else "(root)"


def iter_leaf_verdicts(root: Node, depth_bound: int) -> Iterator[bool]:
    """Yield leaf verdicts left to right, enforcing the depth bound.

    Depth-bound violations report the successor-index prefix of the
    offending path.
    """
    path: list[int] = []
    iters: list[Iterator[Node]] = []
    node = root
    while True:
        while node.verdict is None:
            kids = node.successors()
            if not kids:
                raise EvaluationError(
                    f"internal node without successors at path {_format_path(path)}")
            if len(iters) >= depth_bound:
                raise EvaluationError(
                    f"depth bound {depth_bound} exceeded at path "
                    f"{_format_path(path + [0])}")
            it = iter(kids)
            iters.append(it)
            path.append(0)
            node = next(it)
        yield node.verdict
        nxt = None
        while iters:
            nxt = next(iters[-1], None)
            if nxt is not None:
                path[-1] += 1
                break
            iters.pop()
            path.pop()
        if nxt is None:
            return
        node = nxt


def path_counts(machine: Machine, x: Any = None) -> PathCounts:
    """Exact leaf census of the tree of `machine` on input `x`."""
    total = accepting = 0
    for verdict in iter_leaf_verdicts(machine.root(x), machine.depth_bound):
        total += 1
        if verdict:
            accepting += 1
    return PathCounts(total, accepting, total - accepting)


def leftmost_path(machine: Machine, x: Any = None) -> list[Node]:
    """The nodes visited by always descending to successor index 0."""
    node = machine.root(x)
    out = [node]
    while node.verdict is None:
        kids = node.successors()
        if not kids:
            raise EvaluationError("internal node without successors on the leftmost path")
        if len(out) > machine.depth_bound:
            raise EvaluationError(
                f"depth bound {machine.depth_bound} exceeded on the leftmost path")
        node = kids[0]
        out.append(node)
    return out


def is_deterministic_subtree(node: Node, depth_limit: int | None = None) -> bool:
    """True iff the subtree rooted at `node` is a single path.

    Equivalently: no node below (or at) `node` has two or more successors.
    """
    depth = 0
    while node.verdict is None:
        kids = node.successors()
        if not kids:
            raise EvaluationError("internal node without successors")
        if len(kids) > 1:
            return False
        depth += 1
        if depth_limit is not None and depth > depth_limit:
            raise EvaluationError(
                f"depth limit {depth_limit} exceeded while testing for a single path")
        node = kids[0]
    return True


def binarize(machine: Machine) -> Machine:
    """Equivalent machine whose every internal node has exactly two successors.

    Fan-out above two becomes a right-leaning cascade of binary nodes and
    single-successor nodes are contracted away. The leaf sequence and its
    verdicts are unchanged, so all path counts are preserved.
    """
    bound = machine.depth_bound * max(1, machine.fanout_bound - 1)

    def build(x):
        return _binarize_node(machine.root(x))

    return Machine("combinator-wrapper", bound, 2, build)


def _binarize_node(node: Node) -> Node:
    while node.verdict is None:
        kids = node.successors()
        if not kids:
            raise EvaluationError("internal node without successors")
        if len(kids) == 1:
            node = kids[0]
            continue
        return _binary_cascade(kids)
    return node


def _binary_cascade(kids: tuple[Node, ...]) -> Node:
    if len(kids) == 2:
        first, second = kids
        return internal(lambda: (_binarize_node(first), _binarize_node(second)))
    first, rest = kids[0], kids[1:]
    return internal(lambda: (_binarize_node(first), _binary_cascade(rest)))


def normalize_perfect(machine: Machine, p: int) -> Machine:
    """Reshape the machine into the perfect binary tree of depth `p`.

    Requires the binarized tree to fit: depth at most `p` and at most 2**p
    leaves. Original leaves fill the lexicographically smallest depth-`p`
    slots in traversal order and keep their verdicts; every padding slot
    rejects. The accepting count is preserved and the total becomes 2**p.
    """
    if p < 0:
        raise ParameterError("p must be a natural number")
    binarized = binarize(machine)

    def build(x):
        verdicts: list[bool] = []
        _collect_bounded(binarized.root(x), p, verdicts)
        size = 1 << p
        if len(verdicts) > size:
            raise NormalizationError(
                f"{len(verdicts)} leaves do not fit in a perfect tree of depth {p}")
        return _perfect_subtree(tuple(verdicts), 0, size)

    return Machine("combinator-wrapper", p, 2, build)


def _collect_bounded(node: Node, limit: int, out: list[bool], depth: int = 0) -> None:
    if node.verdict is not None:
        out.append(node.verdict)
        return
    if depth >= limit:
        raise NormalizationError(
            f"tree deeper than {limit}; cannot pad to a perfect tree of that depth")
    kids = node.successors()
    if not kids:
        raise EvaluationError("internal node without successors")
    for kid in kids:
        _collect_bounded(kid, limit, out, depth + 1)


def _perfect_subtree(verdicts: tuple[bool, ...], lo: int, size: int) -> Node:
    if size == 1:
        return leaf(verdicts[lo] if lo < len(verdicts) else REJECT)
    half = size >> 1
    return internal(lambda: (_perfect_subtree(verdicts, lo, half),
                             _perfect_subtree(verdicts, lo + half, half)))


def evaluate_poly_bounded(machine: Machine, x: Any = None) -> int:
    """Count all paths with a plain stack walk and return the count minus one.

    Intended for machines with few paths; deliberately independent of
    `path_counts`, with which it must agree on every machine.
    """
    bound = machine.depth_bound
    stack = [(machine.root(x), 0)]
    paths = 0
    while stack:
        node, depth = stack.pop()
        if node.verdict is not None:
            paths += 1
            continue
        kids = node.successors()
        if not kids:
            raise EvaluationError("internal node without successors")
        if depth >= bound:
            raise EvaluationError(f"depth bound {bound} exceeded")
        for child in reversed(kids):
            stack.append((child, depth + 1))
    return paths - 1


def leaf_machine(verdict: bool) -> Machine:
    """Machine whose tree is a single leaf with the given verdict."""
    node = leaf(verdict)
    return Machine("leaf", 0, 0, lambda x: node)


def branch_machine(*operands: Machine) -> Machine:
    """Machine whose root branches into the operands' trees, in order."""
    if not operands:
        raise ParameterError("branch_machine needs at least one operand")
    bound = 1 + max(m.depth_bound for m in operands)
    fanout = max(len(operands), max(m.fanout_bound for m in operands))

    def build(x):
        return internal(lambda: tuple(m.root(x) for m in operands))

    return Machine("branch", bound, fanout, build)
