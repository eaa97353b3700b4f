"""Decision problems over pluggable exact counting oracles.

Parity and residue tests, exact count comparisons, the promise problems
over count differences, and the power-of-two scaling identity between
formula-count differences and perfect-matching-count differences. Promise
violations are a third verdict, never an exception, so off-promise inputs
stay assertable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .errors import CapacityError, ParameterError
from .machines import path_counts
from .problems import (
    Caps,
    CnfFormula,
    DEFAULT_CAPS,
    Graph,
    count_alive_leaves,
    count_dnf_sat,
    count_independent_sets,
    count_perfect_matchings,
    count_sat,
    size_of_subtree,
)


@dataclass(frozen=True)
class CountingOracle:
    """Named deterministic exact counter over some instance domain."""

    name: str
    count: Callable[[Any], int]


@dataclass(frozen=True)
class PromiseVerdict:
    """One of yes, no, or promise-violated with the witnessing difference."""

    kind: str
    difference: int | None = None

    def render(self) -> str:
        if self.kind == "violated":
            return f"VIOLATED {self.difference}"
        return self.kind.upper()


YES = PromiseVerdict("yes")
NO = PromiseVerdict("no")


def violated(difference: int) -> PromiseVerdict:
    return PromiseVerdict("violated", difference)


def parity_of(oracle: CountingOracle, x: Any) -> bool:
    """True iff the count is odd."""
    return oracle.count(x) % 2 == 1


def modk_of(oracle: CountingOracle, x: Any, k: int) -> tuple[int, bool]:
    """(count mod k, residue is nonzero)."""
    if k < 2:
        raise ParameterError("k must be at least 2")
    residue = oracle.count(x) % k
    return residue, residue != 0


def diff_eq0(oracle: CountingOracle, x: Any, y: Any) -> bool:
    return oracle.count(x) == oracle.count(y)


def diff_gt0(oracle: CountingOracle, x: Any, y: Any) -> bool:
    return oracle.count(x) > oracle.count(y)


def diff_eq1(oracle: CountingOracle, x: Any, y: Any) -> PromiseVerdict:
    """Yes iff the counts differ by exactly one, no iff they are equal."""
    return _promise(oracle.count(x) - oracle.count(y), 1)


def diff_eqg(oracle: CountingOracle, x: Any, y: Any, k: int) -> PromiseVerdict:
    """Yes iff the counts differ by exactly k >= 1, no iff they are equal."""
    if k < 1:
        raise ParameterError("k must be positive")
    return _promise(oracle.count(x) - oracle.count(y), k)


def _promise(difference: int, target: int) -> PromiseVerdict:
    if difference == target:
        return YES
    if difference == 0:
        return NO
    return violated(difference)


def verify_diff_scaling(phi: CnfFormula, phi_alt: CnfFormula,
                        graph: Graph, graph_alt: Graph, t: int,
                        caps: Caps | None = None) -> bool:
    """Check 2**t * (sat-count difference) == perfect-matching-count difference.

    All four counts come from exhaustive enumeration and the comparison is
    exact integer arithmetic.
    """
    caps = DEFAULT_CAPS if caps is None else caps
    if t < 0:
        raise ParameterError("t must be a natural number")
    if t > caps.max_scaling_exponent:
        raise CapacityError(
            f"scaling exponent {t} exceeds the cap {caps.max_scaling_exponent}")
    sat_difference = count_sat(phi, caps) - count_sat(phi_alt, caps)
    matching_difference = (count_perfect_matchings(graph, caps)
                           - count_perfect_matchings(graph_alt, caps))
    return (1 << t) * sat_difference == matching_difference


# ---------------------------------------------------------------------------
# Ready-made oracles


def tot_oracle() -> CountingOracle:
    """Machine-backed oracle: path count minus one."""
    return CountingOracle("machine-tot", lambda m: path_counts(m).tot)


def acc_oracle() -> CountingOracle:
    """Machine-backed oracle: accepting path count."""
    return CountingOracle("machine-acc", lambda m: path_counts(m).accepting)


def sat_oracle(caps: Caps | None = None) -> CountingOracle:
    return CountingOracle("sat", lambda f: count_sat(f, caps))


def dnf_sat_oracle(caps: Caps | None = None) -> CountingOracle:
    return CountingOracle("dnf-sat", lambda f: count_dnf_sat(f, caps))


def perfect_matching_oracle(caps: Caps | None = None) -> CountingOracle:
    return CountingOracle("perfect-matching",
                          lambda g: count_perfect_matchings(g, caps))


def independent_set_oracle(caps: Caps | None = None) -> CountingOracle:
    return CountingOracle("independent-set",
                          lambda g: count_independent_sets(g, caps))


def subtree_node_oracle(caps: Caps | None = None) -> CountingOracle:
    return CountingOracle("subtree-nodes", lambda s: size_of_subtree(s, caps))


def subtree_leaf_oracle(caps: Caps | None = None) -> CountingOracle:
    return CountingOracle("subtree-alive-leaves",
                          lambda s: count_alive_leaves(s, caps))


def machine_oracle(kind: str = "tot") -> CountingOracle:
    if kind == "tot":
        return tot_oracle()
    if kind == "acc":
        return acc_oracle()
    raise ParameterError("machine oracle kind must be 'tot' or 'acc'")
