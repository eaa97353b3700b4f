"""Boolean circuits over binary prefixes of bounded length.

A circuit for prefixes of maximum length n has 2n inputs: index i < n
reads prefix bit i (0 beyond the current prefix) and index n + i reads the
indicator "the prefix is longer than i". Gates form a flat list; each gate
may reference earlier gates only and the last gate is the output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ParameterError

_OPS = {"INPUT": 1, "CONST": 1, "NOT": 1, "AND": 2, "OR": 2}

Gate = tuple


@dataclass(frozen=True)
class Circuit:
    num_bits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.num_bits < 0:
            raise ParameterError("num_bits must be a natural number")
        gates = tuple(tuple(g) for g in self.gates)
        object.__setattr__(self, "gates", gates)
        if not gates:
            raise ParameterError("a circuit needs at least one gate")
        for index, gate in enumerate(gates):
            if not gate or gate[0] not in _OPS or len(gate) != _OPS[gate[0]] + 1:
                raise ParameterError(f"gate {index}: malformed gate {gate!r}")
            op = gate[0]
            if op == "INPUT":
                if not 0 <= gate[1] < 2 * self.num_bits:
                    raise ParameterError(
                        f"gate {index}: input index {gate[1]} outside 0..{2 * self.num_bits - 1}")
            elif op == "CONST":
                if gate[1] not in (0, 1):
                    raise ParameterError(f"gate {index}: constant must be 0 or 1")
            else:
                for ref in gate[1:]:
                    if not 0 <= ref < index:
                        raise ParameterError(
                            f"gate {index}: reference {ref} is not an earlier gate")

    def evaluate(self, prefix: Sequence[int]) -> bool:
        """Value of the output gate on the given prefix."""
        n = self.num_bits
        length = len(prefix)
        if length > n:
            raise ParameterError(f"prefix longer than {n}")
        values: list[int] = []
        for gate in self.gates:
            op = gate[0]
            if op == "INPUT":
                i = gate[1]
                if i < n:
                    values.append(int(prefix[i]) & 1 if i < length else 0)
                else:
                    values.append(1 if length > i - n else 0)
            elif op == "CONST":
                values.append(gate[1])
            elif op == "NOT":
                values.append(1 - values[gate[1]])
            elif op == "AND":
                values.append(values[gate[1]] & values[gate[2]])
            else:
                values.append(values[gate[1]] | values[gate[2]])
        return bool(values[-1])


class CircuitBuilder:
    """Incremental gate-list builder; every method returns a gate id."""

    def __init__(self, num_bits: int):
        self.num_bits = num_bits
        self._gates: list[Gate] = []

    def _emit(self, gate: Gate) -> int:
        self._gates.append(gate)
        return len(self._gates) - 1

    def bit(self, i: int) -> int:
        """Prefix bit i; reads 0 beyond the current prefix."""
        if not 0 <= i < self.num_bits:
            raise ParameterError(f"bit index {i} outside 0..{self.num_bits - 1}")
        return self._emit(("INPUT", i))

    def longer_than(self, i: int) -> int:
        """Indicator that the prefix is longer than i."""
        if not 0 <= i < self.num_bits:
            raise ParameterError(f"length index {i} outside 0..{self.num_bits - 1}")
        return self._emit(("INPUT", self.num_bits + i))

    def const(self, value: int) -> int:
        return self._emit(("CONST", 1 if value else 0))

    def not_(self, a: int) -> int:
        return self._emit(("NOT", a))

    def and_(self, a: int, b: int) -> int:
        return self._emit(("AND", a, b))

    def or_(self, a: int, b: int) -> int:
        return self._emit(("OR", a, b))

    def all_of(self, ids: Sequence[int]) -> int:
        if not ids:
            return self.const(1)
        out = ids[0]
        for next_id in ids[1:]:
            out = self.and_(out, next_id)
        return out

    def any_of(self, ids: Sequence[int]) -> int:
        if not ids:
            return self.const(0)
        out = ids[0]
        for next_id in ids[1:]:
            out = self.or_(out, next_id)
        return out

    def build(self) -> Circuit:
        if not self._gates:
            self.const(0)
        return Circuit(self.num_bits, tuple(self._gates))


def constant_circuit(num_bits: int, value: bool) -> Circuit:
    return Circuit(num_bits, (("CONST", 1 if value else 0),))


def restrict_first_bit(circuit: Circuit, bit: int) -> Circuit:
    """Specialize the first prefix bit to `bit` and re-index the rest.

    The returned circuit works over prefixes one bit shorter and satisfies
    restricted.evaluate(p) == circuit.evaluate((bit,) + p) for every p.
    """
    n = circuit.num_bits
    if n < 1:
        raise ParameterError("cannot restrict a circuit over empty prefixes")
    bit = 1 if bit else 0
    gates: list[Gate] = []
    for gate in circuit.gates:
        if gate[0] != "INPUT":
            gates.append(gate)
            continue
        i = gate[1]
        if i == 0:
            gates.append(("CONST", bit))
        elif i < n:
            gates.append(("INPUT", i - 1))
        elif i == n:
            # "longer than 0" always holds once the first bit is fixed.
            gates.append(("CONST", 1))
        else:
            gates.append(("INPUT", i - 2))
    return Circuit(n - 1, tuple(gates))
