"""Verification suites behind the check command and the acceptance tests.

Each suite regenerates a seeded corpus, exercises one family of counting
contracts on it, and reports failures as serialized counterexamples. Suite
output is a pure function of the configuration, so reports regenerate
byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable

from . import corpus as corpus_mod
from .combinators import (
    acc_to_tot_modk,
    add,
    double_accepting,
    gap_decompose,
    mark_leftmost_reject,
    multiply,
    normalize_gap_offset,
    subtract_one,
)
from .corpus import CorpusConfig, CorpusEntry, generate_corpus
from .diff_family import (
    CountingOracle,
    acc_oracle,
    diff_eq0,
    diff_eq1,
    diff_eqg,
    diff_gt0,
    dnf_sat_oracle,
    independent_set_oracle,
    modk_of,
    parity_of,
    perfect_matching_oracle,
    sat_oracle,
    subtree_leaf_oracle,
    subtree_node_oracle,
    verify_diff_scaling,
    violated,
    NO,
    YES,
)
from .errors import ParameterError
from .machines import (
    Machine,
    branch_machine,
    evaluate_poly_bounded,
    leaf_machine,
    normalize_perfect,
    path_counts,
)
from .problems import (
    Caps,
    CnfFormula,
    DEFAULT_CAPS,
    Graph,
    build_self_reducible_machine,
    count_dnf_sat,
    count_independent_sets,
    count_perfect_matchings,
    count_sat,
    disjoint_union,
    dnf_self_reduction,
    independent_set_self_reduction,
    perfect_matching_self_reduction,
    size_of_subtree,
    subtree_self_reduction,
)
from .reductions import (
    broken_cnf_renaming,
    check_parsimonious,
    cnf_reverse_renaming,
    compose,
    dnf_to_subtree,
    identity_reduction,
)


@dataclass(frozen=True)
class CheckConfig:
    seed: int = 0
    count: int = 200
    max_depth: int = 6
    max_fanout: int = 3
    k: int | None = None
    caps: Caps = DEFAULT_CAPS
    exhaustive_vertices: int = 8

    def corpus(self, **overrides) -> CorpusConfig:
        base = dict(seed=self.seed, count=self.count, max_depth=self.max_depth,
                    max_fanout=self.max_fanout)
        base.update(overrides)
        return CorpusConfig(**base)


@dataclass
class SuiteResult:
    proposition: str
    checked: int = 0
    lines: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"RESULT {self.proposition} {status} "
                f"checked={self.checked} failed={len(self.failures)}")

    def merge(self, other: "SuiteResult") -> None:
        self.checked += other.checked
        self.lines.extend(other.lines)
        self.failures.extend(other.failures)


def _rng(config: CheckConfig, stream: str) -> random.Random:
    return random.Random(f"{config.seed}:{stream}")


def _corpus_with_counts(config: CheckConfig, **overrides):
    entries = generate_corpus(config.corpus(**overrides))
    return [(entry, path_counts(entry.machine)) for entry in entries]


# ---------------------------------------------------------------------------
# Closure of the count-minus-one value under the arithmetic combinators


def closure_sub1_suite(config: CheckConfig,
                       impl: Callable[[Machine], Machine] = subtract_one) -> SuiteResult:
    result = SuiteResult("closure-sub1")
    for entry, counts in _corpus_with_counts(config):
        expected = max(counts.tot - 1, 0)
        got = path_counts(impl(entry.machine)).tot
        result.checked += 1
        if got != expected:
            result.failures.append(
                f"op=sub1 operand={entry.text} expected={expected} got={got}")
    result.lines.append(f"closure-sub1 machines={result.checked} "
                        f"failures={len(result.failures)}")
    return result


def _closure_pair_suite(name: str, config: CheckConfig,
                        impl: Callable[[Machine, Machine], Machine],
                        combine: Callable[[int, int], int]) -> SuiteResult:
    result = SuiteResult(name)
    items = _corpus_with_counts(config)
    for i, (left, left_counts) in enumerate(items):
        left_tot = left_counts.tot
        for right, right_counts in items[i:]:
            expected = combine(left_tot, right_counts.tot)
            got = path_counts(impl(left.machine, right.machine)).tot
            result.checked += 1
            if got != expected:
                result.failures.append(
                    f"op={name.removeprefix('closure-')} lhs={left.text} "
                    f"rhs={right.text} expected={expected} got={got}")
    result.lines.append(f"{name} machines={len(items)} pairs={result.checked} "
                        f"failures={len(result.failures)}")
    return result


def closure_add_suite(config: CheckConfig, impl=add) -> SuiteResult:
    return _closure_pair_suite("closure-add", config, impl, lambda a, b: a + b)


def closure_mul_suite(config: CheckConfig, impl=multiply) -> SuiteResult:
    return _closure_pair_suite("closure-mul", config, impl, lambda a, b: a * b)


def closure_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("closure")
    for sub in (closure_sub1_suite(config), closure_add_suite(config),
                closure_mul_suite(config)):
        result.merge(sub)
    return result


def negative_control_suite(config: CheckConfig) -> SuiteResult:
    """Self-test of the harness: a deliberately broken addition combinator.

    This suite is supposed to FAIL; it demonstrates that broken contracts
    surface as counterexamples instead of passing silently.
    """
    def mutated_add(left: Machine, right: Machine) -> Machine:
        return branch_machine(leaf_machine(False), add(left, right))

    small = replace(config, count=min(config.count, 40))
    result = closure_add_suite(small, impl=mutated_add)
    result.proposition = "negative-control"
    result.lines.append("negative-control expects failures: the addition "
                        "combinator was deliberately mutated")
    return result


# ---------------------------------------------------------------------------
# Gap decomposition, normalization, residues, parity, poly-bounded evaluation


def gap_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("gap")
    items = _corpus_with_counts(config, count=max(config.count, 2))
    pairs = min(config.count, len(items))
    for i in range(pairs):
        (first, first_counts) = items[i]
        (second, second_counts) = items[(i + 1) % len(items)]
        expected = first_counts.accepting - second_counts.accepting
        got = gap_decompose(first.machine, second.machine).value()
        result.checked += 1
        if got != expected:
            result.failures.append(
                f"op=gap first={first.text} second={second.text} "
                f"expected={expected} got={got}")
    result.lines.append(f"gap pairs={result.checked} failures={len(result.failures)}")
    return result


def normalize_suite(config: CheckConfig, depths: tuple[int, ...] = (4, 5, 6, 7, 8)) -> SuiteResult:
    # Two shallow sub-corpora so every machine binarizes within depth 4.
    result = SuiteResult("normalize")
    half = max(config.count // 2, 1)
    items = (_corpus_with_counts(config, seed=config.seed * 2 + 1, count=half,
                                 max_depth=2, max_fanout=3)
             + _corpus_with_counts(config, seed=config.seed * 2 + 2,
                                   count=max(config.count - half, 1),
                                   max_depth=4, max_fanout=2))
    for index, (entry, counts) in enumerate(items):
        for p in depths:
            normalized = normalize_perfect(entry.machine, p)
            ncounts = path_counts(normalized)
            result.checked += 1
            if ncounts.total != 1 << p or ncounts.accepting != counts.accepting:
                result.failures.append(
                    f"op=normalize machine={entry.text} p={p} "
                    f"got total={ncounts.total} acc={ncounts.accepting} "
                    f"want total={1 << p} acc={counts.accepting}")
                continue
            gval = (index * 7 + p) % 23
            shifted, doubled = normalize_gap_offset(gval, entry.machine, p)
            identity_left = gval - counts.accepting
            identity_right = shifted - path_counts(doubled).tot
            if identity_left != identity_right:
                result.failures.append(
                    f"op=normalize-gap machine={entry.text} p={p} gval={gval} "
                    f"lhs={identity_left} rhs={identity_right}")
    result.lines.append(f"normalize machines={len(items)} depths={list(depths)} "
                        f"checks={result.checked} failures={len(result.failures)}")
    return result


def modk_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("modk")
    ks = (config.k,) if config.k is not None else (2, 3, 4, 5, 6, 7)
    for k in ks:
        if k < 2:
            raise ParameterError("k must be at least 2")
    items = _corpus_with_counts(config)
    for entry, counts in items:
        for k in ks:
            converted = path_counts(acc_to_tot_modk(entry.machine, k))
            result.checked += 1
            if converted.total != counts.accepting + k * counts.rejecting + 1:
                result.failures.append(
                    f"op=modk machine={entry.text} k={k} "
                    f"unexpected total={converted.total}")
            elif converted.tot % k != counts.accepting % k:
                result.failures.append(
                    f"op=modk machine={entry.text} k={k} residue "
                    f"{converted.tot % k} != {counts.accepting % k}")
    result.lines.append(f"modk machines={len(items)} ks={list(ks)} "
                        f"checks={result.checked} failures={len(result.failures)}")
    return result


def parity_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("parity")
    acc = acc_oracle()
    for entry, counts in _corpus_with_counts(config):
        marked = path_counts(mark_leftmost_reject(entry.machine))
        result.checked += 1
        if marked.accepting != counts.tot:
            result.failures.append(
                f"op=mark-leftmost machine={entry.text} "
                f"acc={marked.accepting} tot={counts.tot}")
            continue
        odd_via_acc = parity_of(acc, entry.machine)
        odd_via_tot = path_counts(acc_to_tot_modk(entry.machine, 2)).tot % 2 == 1
        if odd_via_acc != odd_via_tot:
            result.failures.append(
                f"op=parity machine={entry.text} acc-parity={odd_via_acc} "
                f"tot-parity={odd_via_tot}")
    result.lines.append(f"parity machines={result.checked} "
                        f"failures={len(result.failures)}")
    return result


def polybound_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("polybound")
    for entry, counts in _corpus_with_counts(config):
        got = evaluate_poly_bounded(entry.machine)
        result.checked += 1
        if got != counts.total - 1:
            result.failures.append(
                f"op=polybound machine={entry.text} got={got} "
                f"expected={counts.total - 1}")
    result.lines.append(f"polybound machines={result.checked} "
                        f"failures={len(result.failures)}")
    return result


# ---------------------------------------------------------------------------
# Self-reduction machines against the brute-force oracles


def _check_sr(result: SuiteResult, sr, instance, expected: int, label: str) -> None:
    machine = build_self_reducible_machine(sr, instance)
    got = path_counts(machine).tot
    result.checked += 1
    if got != expected:
        result.failures.append(
            f"op=self-reduction family={sr.name} instance=[{label}] "
            f"machine-tot={got} brute-force={expected}")


def self_reduction_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("self-reduction")
    caps = config.caps
    pm_sr = perfect_matching_self_reduction(caps)
    dnf_sr = dnf_self_reduction(caps)
    is_sr = independent_set_self_reduction(caps)
    st_sr = subtree_self_reduction(caps)

    # Every bipartite graph with a fixed bipartition, up to the vertex limit.
    exhausted = 0
    limit = config.exhaustive_vertices
    for left in range(1, limit // 2 + 1):
        for right in range(left, limit - left + 1):
            slots = [(u, left + v) for u in range(1, left + 1)
                     for v in range(1, right + 1)]
            side = frozenset(range(1, left + 1))
            for mask in range(1 << len(slots)):
                edges = tuple(slots[i] for i in range(len(slots))
                              if mask >> i & 1)
                graph = Graph(left + right, edges, side)
                _check_sr(result, pm_sr, graph,
                          count_perfect_matchings(graph, caps),
                          f"K{left},{right} mask={mask}")
                exhausted += 1
    result.lines.append(f"self-reduction exhaustive bipartite graphs={exhausted} "
                        f"(vertex limit {limit})")

    rng = _rng(config, "self-reduction")
    samples = max(config.count, 100)
    for index in range(samples):
        left = rng.randint(1, 6)
        graph = corpus_mod.random_bipartite_graph(rng, left, rng.randint(1, 12 - left),
                                                  rng.uniform(0.3, 0.8))
        _check_sr(result, pm_sr, graph, count_perfect_matchings(graph, caps),
                  f"random-bipartite-{index}")
    for index in range(samples):
        n = rng.randint(2, 10)
        formula = corpus_mod.random_dnf(rng, n, rng.randint(1, 2 * n))
        _check_sr(result, dnf_sr, formula, count_dnf_sat(formula, caps),
                  f"random-dnf-{index}")
    for index in range(samples):
        graph = corpus_mod.random_graph(rng, rng.randint(1, 10),
                                        rng.uniform(0.2, 0.8))
        _check_sr(result, is_sr, graph, count_independent_sets(graph, caps),
                  f"random-graph-{index}")
    for index in range(samples):
        instance = corpus_mod.random_subtree_instance(rng, rng.randint(0, 6))
        _check_sr(result, st_sr, instance, size_of_subtree(instance, caps),
                  f"random-subtree-{index}")
    result.lines.append(f"self-reduction random instances={4 * samples} "
                        f"failures={len(result.failures)}")
    return result


# ---------------------------------------------------------------------------
# Difference-problem evaluators against direct count comparison


def _diff_kind(result: SuiteResult, rng: random.Random, kind: str,
               oracle: CountingOracle, instances: list, pairs: int) -> None:
    counts = [oracle.count(x) for x in instances]
    for index in range(pairs):
        i = rng.randrange(len(instances))
        j = rng.randrange(len(instances))
        x, y = instances[i], instances[j]
        cx, cy = counts[i], counts[j]
        d = cx - cy
        problems_found = []
        if diff_eq0(oracle, x, y) != (cx == cy):
            problems_found.append("eq0")
        if diff_gt0(oracle, x, y) != (cx > cy):
            problems_found.append("gt0")
        trichotomy = sum([diff_gt0(oracle, x, y), diff_gt0(oracle, y, x),
                          diff_eq0(oracle, x, y)])
        if trichotomy != 1:
            problems_found.append("trichotomy")
        expected_eq1 = YES if d == 1 else (NO if d == 0 else violated(d))
        if diff_eq1(oracle, x, y) != expected_eq1:
            problems_found.append("eq1")
        k = d if d >= 1 else 1
        expected_eqg = YES if d == k else (NO if d == 0 else violated(d))
        if diff_eqg(oracle, x, y, k) != expected_eqg:
            problems_found.append("eqg-on-promise")
        k_off = d + 1 if d + 1 >= 1 else 1
        if k_off != d:
            expected_off = NO if d == 0 else violated(d)
            if diff_eqg(oracle, x, y, k_off) != expected_off:
                problems_found.append("eqg-off-promise")
        if parity_of(oracle, x) != modk_of(oracle, x, 2)[1]:
            problems_found.append("parity-vs-mod2")
        result.checked += 1
        if problems_found:
            result.failures.append(
                f"op=diff-family kind={kind} pair=({i},{j}) counts=({cx},{cy}) "
                f"bad={','.join(problems_found)}")


def diff_family_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("diff-family")
    caps = config.caps
    rng = _rng(config, "diff-family")
    pairs = config.count

    cnfs = [corpus_mod.random_cnf(rng, rng.randint(3, 7), rng.randint(1, 6))
            for _ in range(25)]
    _diff_kind(result, rng, "cnf", sat_oracle(caps), cnfs, pairs)
    dnfs = [corpus_mod.random_dnf(rng, rng.randint(3, 7), rng.randint(1, 6))
            for _ in range(25)]
    _diff_kind(result, rng, "dnf", dnf_sat_oracle(caps), dnfs, pairs)
    bipartite = [corpus_mod.random_bipartite_graph(rng, rng.randint(1, 4),
                                                   rng.randint(1, 4))
                 for _ in range(25)]
    _diff_kind(result, rng, "perfect-matching", perfect_matching_oracle(caps),
               bipartite, pairs)
    graphs = [corpus_mod.random_graph(rng, rng.randint(2, 7))
              for _ in range(25)]
    _diff_kind(result, rng, "independent-set", independent_set_oracle(caps),
               graphs, pairs)
    subtrees = [corpus_mod.random_subtree_instance(rng, rng.randint(0, 6))
                for _ in range(25)]
    _diff_kind(result, rng, "size-of-subtree", subtree_node_oracle(caps),
               subtrees, pairs)
    result.lines.append(f"diff-family pairs={result.checked} "
                        f"failures={len(result.failures)}")
    return result


# ---------------------------------------------------------------------------
# The power-of-two scaling identity


def _graph_with_matching_count(powers_of_two: int, powers_of_three: int) -> Graph:
    graph = corpus_mod.matching_graph(1)
    for _ in range(powers_of_two):
        graph = disjoint_union(graph, corpus_mod.cycle_graph(4))
    for _ in range(powers_of_three):
        graph = disjoint_union(graph, corpus_mod.complete_graph(4))
    return graph


def _split_powers(value: int) -> tuple[int, int] | None:
    twos = threes = 0
    while value % 2 == 0:
        value //= 2
        twos += 1
    while value % 3 == 0:
        value //= 3
        threes += 1
    return (twos, threes) if value == 1 else None


def scaling_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("scaling")
    caps = config.caps

    empty2 = CnfFormula(2, ())
    x1 = CnfFormula(2, ((1,),))
    both = CnfFormula(2, ((1,), (2,)))
    either = CnfFormula(2, ((1, 2),))
    contra = CnfFormula(2, ((1,), (-1,)))
    empty3 = CnfFormula(3, ())
    wide = CnfFormula(3, ((1, 2, 3),))
    formulas = [empty2, x1, both, either, contra, empty3, wide]
    no_matchings = corpus_mod.edgeless_graph(2)

    # Reflexive quadruples hold for every exponent.
    for index, formula in enumerate(formulas):
        graph = _graph_with_matching_count(index % 3, index % 2)
        for t in (0, 1, 5):
            result.checked += 1
            if not verify_diff_scaling(formula, formula, graph, graph, t, caps):
                result.failures.append(
                    f"op=scaling reflexive formula-index={index} t={t}")

    pairs = [(x1, both), (empty2, x1), (either, both), (empty2, contra),
             (either, x1), (wide, both), (empty3, empty2), (empty3, wide),
             (wide, either), (both, either), (empty2, empty2)]
    built = 0
    for index, (phi, phi_alt) in enumerate(pairs):
        diff = count_sat(phi, caps) - count_sat(phi_alt, caps)
        for t in (0, 2):
            result.checked += 1
            if diff == 0:
                ok = verify_diff_scaling(phi, phi_alt, no_matchings, no_matchings,
                                         t, caps)
                if not ok:
                    result.failures.append(
                        f"op=scaling zero-difference pair={index} t={t}")
                built += 1
                continue
            split = _split_powers(abs(diff))
            if split is None:
                raise ParameterError(
                    f"scaling zoo produced difference {diff} outside 2^a*3^b")
            twos, threes = split
            graph = _graph_with_matching_count(twos + t, threes)
            graph_alt = no_matchings
            if diff < 0:
                graph, graph_alt = graph_alt, graph
            if not verify_diff_scaling(phi, phi_alt, graph, graph_alt, t, caps):
                result.failures.append(
                    f"op=scaling pair={index} t={t} diff={diff}")
            built += 1
            # A perturbed exponent must break a nonzero identity.
            result.checked += 1
            if verify_diff_scaling(phi, phi_alt, graph, graph_alt, t + 1, caps):
                result.failures.append(
                    f"op=scaling pair={index} perturbed-t={t + 1} still true")
    result.lines.append(f"scaling quadruples={built} checks={result.checked} "
                        f"failures={len(result.failures)}")
    return result


# ---------------------------------------------------------------------------
# Parsimony of the shipped reductions


def parsimony_suite(config: CheckConfig) -> SuiteResult:
    result = SuiteResult("parsimony")
    caps = config.caps
    rng = _rng(config, "parsimony")
    count = max(config.count, 10)

    cnfs = [(f"cnf-{i}", corpus_mod.random_cnf(rng, rng.randint(3, 6),
                                               rng.randint(1, 5)))
            for i in range(count)]
    dnfs = [(f"dnf-{i}", corpus_mod.random_dnf(rng, rng.randint(3, 7),
                                               rng.randint(1, 6)))
            for i in range(count)]
    sat = sat_oracle(caps)
    checks = [
        (identity_reduction("cnf"), sat, sat, cnfs, True),
        (cnf_reverse_renaming(), sat, sat, cnfs, True),
        (compose(identity_reduction("cnf"), cnf_reverse_renaming()),
         sat, sat, cnfs, True),
        (dnf_to_subtree(), dnf_sat_oracle(caps), subtree_leaf_oracle(caps),
         dnfs, True),
        (broken_cnf_renaming(), sat, sat, cnfs, False),
    ]
    for reduction, source, target, instances, expect_pass in checks:
        report = check_parsimonious(reduction, source, target, instances,
                                    corpus_description=f"{len(instances)} seeded instances")
        result.checked += len(report.entries)
        result.lines.extend(report.render().splitlines())
        if expect_pass and not report.passed:
            witness = report.failures[0].render() if report.failures else "no witness"
            result.failures.append(
                f"op=parsimony reduction={reduction.name} unexpectedly failed: {witness}")
        if not expect_pass:
            if report.passed:
                result.failures.append(
                    f"op=parsimony negative control {reduction.name} "
                    f"passed but must fail")
            else:
                witness = report.failures[0].render()
                result.lines.append(
                    f"negative control {reduction.name} failed as expected: {witness}")

    # A reduction that preserves counts must preserve every verdict.
    renaming = cnf_reverse_renaming()
    for i in range(0, min(len(cnfs) - 1, 50), 2):
        (_, x), (_, y) = cnfs[i], cnfs[i + 1]
        rx = renaming.transform(x)
        ry = renaming.transform(y)
        result.checked += 1
        agreement = (
            parity_of(sat, x) == parity_of(sat, rx)
            and modk_of(sat, x, 3) == modk_of(sat, rx, 3)
            and diff_eq0(sat, x, y) == diff_eq0(sat, rx, ry)
            and diff_gt0(sat, x, y) == diff_gt0(sat, rx, ry)
            and diff_eq1(sat, x, y) == diff_eq1(sat, rx, ry))
        if not agreement:
            result.failures.append(
                f"op=parsimony verdict disagreement on cnf pair ({i},{i + 1})")
    result.lines.append(f"parsimony checks={result.checked} "
                        f"failures={len(result.failures)}")
    return result


# ---------------------------------------------------------------------------
# Registry


PROPOSITIONS: dict[str, Callable[[CheckConfig], SuiteResult]] = {
    "closure": closure_suite,
    "closure-sub1": closure_sub1_suite,
    "closure-add": closure_add_suite,
    "closure-mul": closure_mul_suite,
    "gap": gap_suite,
    "normalize": normalize_suite,
    "modk": modk_suite,
    "parity": parity_suite,
    "polybound": polybound_suite,
    "self-reduction": self_reduction_suite,
    "diff-family": diff_family_suite,
    "scaling": scaling_suite,
    "parsimony": parsimony_suite,
    "negative-control": negative_control_suite,
}


def run_proposition(name: str, config: CheckConfig) -> SuiteResult:
    if name not in PROPOSITIONS:
        known = ", ".join(sorted(PROPOSITIONS))
        raise ParameterError(f"unknown proposition {name!r}; known: {known}")
    return PROPOSITIONS[name](config)
