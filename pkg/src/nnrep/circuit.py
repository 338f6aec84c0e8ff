"""Depth-3 OR(AND(THR)) circuits compiled from NN representations.

Each positive/negative anchor pair ``(a, b)`` gives a threshold gate
``1{2(a-b).X >= ||a||^2 - ||b||^2}``, i.e. "X is at least as close to a as to
b". Each positive anchor ANDs its gates against every negative anchor, and a
single OR collects the positives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .boolfn import BooleanFunction, input_bits, truth_table
from .nnrepr import AnchorMatrix, classify_block


class ConstantCircuitError(ValueError):
    """The anchors carry a single label, so they compute a constant."""

    def __init__(self, value: int):
        super().__init__(f"all anchors have label {value}; the function is constant {value}")
        self.value = value


@dataclass(frozen=True)
class ThrGate:
    weights: tuple[int, ...]
    threshold: int

    def fires(self, x: Sequence[int]) -> bool:
        return sum(w * b for w, b in zip(self.weights, x)) >= self.threshold


@dataclass(frozen=True)
class ThresholdCircuit:
    n: int
    thr_gates: tuple[ThrGate, ...]
    and_gates: tuple[tuple[int, ...], ...]
    top_or: tuple[int, ...]

    def __post_init__(self):
        for g in self.thr_gates:
            if len(g.weights) != self.n:
                raise ValueError("threshold gate width does not match input count")
        for inputs in self.and_gates:
            if any(not 0 <= i < len(self.thr_gates) for i in inputs):
                raise ValueError("AND gate references a missing threshold gate")
        if any(not 0 <= i < len(self.and_gates) for i in self.top_or):
            raise ValueError("OR gate references a missing AND gate")

    @property
    def gate_count(self) -> int:
        return len(self.thr_gates) + len(self.and_gates) + 1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "thr": [{"w": list(g.weights), "b": g.threshold} for g in self.thr_gates],
            "and": [list(a) for a in self.and_gates],
            "or": list(self.top_or),
        }

    @classmethod
    def from_json(cls, data: dict) -> ThresholdCircuit:
        return cls(
            int(data["n"]),
            tuple(ThrGate(tuple(int(w) for w in g["w"]), int(g["b"])) for g in data["thr"]),
            tuple(tuple(int(i) for i in a) for a in data["and"]),
            tuple(int(i) for i in data["or"]),
        )

    def netlist(self) -> str:
        lines = [f"# OR o AND o THR circuit: n={self.n}, {self.gate_count} gates"]
        lines.append("inputs " + " ".join(f"x{i + 1}" for i in range(self.n)))
        for k, g in enumerate(self.thr_gates):
            terms = " ".join(f"{w:+d}*x{i + 1}" for i, w in enumerate(g.weights) if w)
            lines.append(f"thr t{k} = [{terms or '0'} >= {g.threshold}]")
        for k, ins in enumerate(self.and_gates):
            lines.append(f"and g{k} = AND(" + ", ".join(f"t{i}" for i in ins) + ")")
        lines.append("or out = OR(" + ", ".join(f"g{i}" for i in self.top_or) + ")")
        return "\n".join(lines) + "\n"


def _integer_gate(a: Sequence[Fraction], b: Sequence[Fraction]) -> ThrGate:
    coeffs = [2 * (x - y) for x, y in zip(a, b)]
    rhs = sum((x * x for x in a), Fraction(0)) - sum((y * y for y in b), Fraction(0))
    scale = lcm(*(q.denominator for q in coeffs + [rhs]))
    ints = [int(q * scale) for q in coeffs]
    rhs_int = int(rhs * scale)
    g = gcd(*ints, rhs_int)
    if g > 1:
        ints = [v // g for v in ints]
        rhs_int //= g
    return ThrGate(tuple(ints), rhs_int)


def nn_to_circuit(A: AnchorMatrix, *, check: bool = True) -> ThresholdCircuit:
    """Compile anchors into a circuit of size ``|P||N| + |P| + 1``.

    With ``check``, also confirm (for ``n <= 20``) that no input lies exactly on
    a gate hyperplane involving its own nearest anchor; those are the only
    gates whose ``>=`` could differ from the strict distance comparison.
    """
    pos, neg = A.positives(), A.negatives()
    if not pos or not neg:
        raise ConstantCircuitError(A.labels[0])
    gates = []
    ands = []
    for i in pos:
        row = []
        for j in neg:
            row.append(len(gates))
            gates.append(_integer_gate(A.anchors[i].coords, A.anchors[j].coords))
        ands.append(tuple(row))
    c = ThresholdCircuit(A.n, tuple(gates), tuple(ands), tuple(range(len(pos))))
    if check and A.n <= 20:
        _check_winner_gates_strict(A, c, pos, neg)
    return c


def _check_winner_gates_strict(A, c, pos, neg):
    winner, _, tie = classify_block(A, 0, 1 << A.n)
    if tie.any():
        raise ValueError("anchors have a cross-label tie; they represent no function")
    margins = _gate_margins(c, input_bits(A.n))
    pos_at = {a: k for k, a in enumerate(pos)}
    neg_at = {b: k for k, b in enumerate(neg)}
    for x, w in enumerate(winner):
        w = int(w)
        if w in pos_at:
            cols = c.and_gates[pos_at[w]]
        else:
            cols = [c.and_gates[p][neg_at[w]] for p in range(len(pos))]
        if np.any(margins[x, list(cols)] == 0):
            raise RuntimeError(f"input {x} lies on a gate hyperplane of its nearest anchor")


def _gate_margins(c: ThresholdCircuit, bits: np.ndarray) -> np.ndarray:
    big = any(abs(w) >= 2**40 for g in c.thr_gates for w in g.weights) or any(
        abs(g.threshold) >= 2**60 for g in c.thr_gates
    )
    dtype = object if big else np.int64
    w = np.array([g.weights for g in c.thr_gates], dtype=dtype).reshape(len(c.thr_gates), c.n)
    b = np.array([g.threshold for g in c.thr_gates], dtype=dtype)
    return bits.astype(dtype) @ w.T - b[None, :]


def simulate_circuit(c: ThresholdCircuit, x: Sequence[int]) -> int:
    x = [int(v) for v in x]
    if len(x) != c.n:
        raise ValueError(f"circuit has {c.n} inputs, got {len(x)}")
    thr = [g.fires(x) for g in c.thr_gates]
    ands = [all(thr[i] for i in ins) for ins in c.and_gates]
    return int(any(ands[i] for i in c.top_or))


def circuit_truth_table(c: ThresholdCircuit) -> np.ndarray:
    out = np.empty(1 << c.n, dtype=np.uint8)
    step = 1 << 15
    for s in range(0, 1 << c.n, step):
        e = min(s + step, 1 << c.n)
        thr = _gate_margins(c, input_bits(c.n, s, e)) >= 0
        ands = np.stack([thr[:, list(ins)].all(axis=1) for ins in c.and_gates], axis=1)
        out[s:e] = ands[:, list(c.top_or)].any(axis=1)
    return out


def circuit_equiv_check(c: ThresholdCircuit, f: BooleanFunction) -> bool:
    if c.n != f.n:
        raise ValueError(f"circuit has {c.n} inputs but the function has {f.n}")
    if c.n > 24:
        raise ValueError("exhaustive equivalence is limited to n <= 24")
    return bool(np.array_equal(circuit_truth_table(c), truth_table(f)))
