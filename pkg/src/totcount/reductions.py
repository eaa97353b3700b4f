"""Count-preserving instance maps and their empirical verification.

A reduction never comes with a proof here; `check_parsimonious` compares
two oracles across a finite corpus and reports per-instance verdicts, so
every parsimony claim is scoped to the corpus it was checked on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .circuits import CircuitBuilder
from .diff_family import CountingOracle
from .errors import CapacityError, ParameterError, ParseError
from .problems import CnfFormula, DnfFormula, Graph, SubtreeInstance

_KINDS: dict[str, type] = {
    "cnf": CnfFormula,
    "dnf": DnfFormula,
    "graph": Graph,
    "subtree": SubtreeInstance,
}


@dataclass(frozen=True)
class Reduction:
    """Deterministic instance map between two problem kinds."""

    name: str
    source_kind: str
    target_kind: str
    transform: Callable[[Any], Any]

    def __post_init__(self):
        for kind in (self.source_kind, self.target_kind):
            if kind not in _KINDS:
                raise ParameterError(f"unknown problem kind {kind!r}")


def apply_reduction(reduction: Reduction, instance: Any) -> Any:
    """Transform one instance, checking both ends are well-formed."""
    if not isinstance(instance, _KINDS[reduction.source_kind]):
        raise ParseError(
            f"{reduction.name} expects a {reduction.source_kind} instance, "
            f"got {type(instance).__name__}")
    image = reduction.transform(instance)
    if not isinstance(image, _KINDS[reduction.target_kind]):
        raise ParseError(
            f"{reduction.name} produced {type(image).__name__}, "
            f"not a {reduction.target_kind} instance")
    return image


def compose(first: Reduction, second: Reduction) -> Reduction:
    """Reduction applying `first` then `second`."""
    if first.target_kind != second.source_kind:
        raise ParameterError(
            f"cannot compose: {first.name} produces {first.target_kind} but "
            f"{second.name} consumes {second.source_kind}")
    return Reduction(
        name=f"{first.name}+{second.name}",
        source_kind=first.source_kind,
        target_kind=second.target_kind,
        transform=lambda x: second.transform(first.transform(x)),
    )


@dataclass(frozen=True)
class ParsimonyEntry:
    instance_id: str
    status: str  # OK | FAIL | SKIP
    source_count: int | None
    target_count: int | None
    note: str = ""

    def render(self) -> str:
        if self.status == "SKIP":
            return f"SKIP - - {self.instance_id} {self.note}".rstrip()
        return (f"{self.status} {self.source_count} {self.target_count} "
                f"{self.instance_id}")


@dataclass(frozen=True)
class ParsimonyReport:
    """Per-instance comparison of source and target counts across a corpus."""

    reduction_name: str
    corpus_description: str
    entries: tuple[ParsimonyEntry, ...]

    @property
    def passed(self) -> bool:
        compared = [e for e in self.entries if e.status != "SKIP"]
        return bool(compared) and all(e.status == "OK" for e in compared)

    @property
    def failures(self) -> tuple[ParsimonyEntry, ...]:
        return tuple(e for e in self.entries if e.status == "FAIL")

    def render(self) -> str:
        ok = sum(1 for e in self.entries if e.status == "OK")
        fail = sum(1 for e in self.entries if e.status == "FAIL")
        skip = sum(1 for e in self.entries if e.status == "SKIP")
        lines = [entry.render() for entry in self.entries]
        lines.append(
            f"SUMMARY {self.reduction_name} on {self.corpus_description}: "
            f"pass={'yes' if self.passed else 'no'} ok={ok} fail={fail} skip={skip}")
        return "\n".join(lines)


def check_parsimonious(reduction: Reduction,
                       source_oracle: CountingOracle,
                       target_oracle: CountingOracle,
                       instances: Iterable[Any],
                       corpus_description: str = "ad-hoc corpus") -> ParsimonyReport:
    """Compare source counts with target counts of the images, instance by
    instance. Capacity errors are recorded as SKIP lines, never raised."""
    entries = []
    for index, item in enumerate(instances):
        if isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], str):
            instance_id, instance = item
        else:
            instance_id, instance = f"{reduction.source_kind}-{index}", item
        try:
            source_count = source_oracle.count(instance)
            target_count = target_oracle.count(apply_reduction(reduction, instance))
        except CapacityError as exc:
            entries.append(ParsimonyEntry(instance_id, "SKIP", None, None,
                                          f"capacity: {exc}"))
            continue
        status = "OK" if source_count == target_count else "FAIL"
        entries.append(ParsimonyEntry(instance_id, status, source_count, target_count))
    return ParsimonyReport(reduction.name, corpus_description, tuple(entries))


# ---------------------------------------------------------------------------
# Shipped reductions


def identity_reduction(kind: str = "cnf") -> Reduction:
    return Reduction(f"identity-{kind}", kind, kind, lambda x: x)


def cnf_reverse_renaming() -> Reduction:
    """Rename variable i to n + 1 - i; a bijection, so counts are preserved."""
    def transform(formula: CnfFormula) -> CnfFormula:
        n = formula.num_vars

        def rename(lit: int) -> int:
            target = n + 1 - abs(lit)
            return target if lit > 0 else -target

        return CnfFormula(n, tuple(tuple(rename(l) for l in c)
                                   for c in formula.clauses))

    return Reduction("cnf-reverse-renaming", "cnf", "cnf", transform)


def dnf_to_subtree() -> Reduction:
    """Assignment-extension tree of a dnf formula.

    A prefix stays alive while some term is not yet falsified, so the alive
    full-depth prefixes are exactly the satisfying assignments: the map is
    parsimonious for the leaf-count oracle of the target, not the
    node-count one.
    """
    def transform(formula: DnfFormula) -> SubtreeInstance:
        n = formula.num_vars
        builder = CircuitBuilder(n)
        term_gates = []
        for term in formula.terms:
            literal_gates = []
            for lit in term:
                position = abs(lit) - 1
                assigned = builder.longer_than(position)
                bit = builder.bit(position)
                matches = bit if lit > 0 else builder.not_(bit)
                literal_gates.append(builder.or_(builder.not_(assigned), matches))
            term_gates.append(builder.all_of(literal_gates))
        builder.any_of(term_gates)
        return SubtreeInstance(n, builder.build())

    return Reduction("dnf-to-subtree", "dnf", "subtree", transform)


def broken_cnf_renaming() -> Reduction:
    """Negative control: collapses variable 2 into variable 1.

    Deliberately not count preserving; used to verify that the parsimony
    checker reports failures with witnesses.
    """
    def transform(formula: CnfFormula) -> CnfFormula:
        def collapse(lit: int) -> int:
            if abs(lit) == 2:
                return 1 if lit > 0 else -1
            return lit

        return CnfFormula(formula.num_vars,
                          tuple(tuple(collapse(l) for l in c)
                                for c in formula.clauses))

    return Reduction("broken-cnf-renaming", "cnf", "cnf", transform)


def shipped_reductions() -> Sequence[Reduction]:
    return (identity_reduction("cnf"), cnf_reverse_renaming(), dnf_to_subtree())
