"""Boolean functions: symmetric profiles, threshold functions, truth tables.

Inputs are bit vectors ``X = (x_1, ..., x_n)``. Truth tables are indexed by
``sum(x_i << (i-1))``, i.e. ``x_1`` is the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

import numpy as np


def _check_bits(x: Sequence[int], n: int) -> tuple[int, ...]:
    bits = tuple(int(b) for b in x)
    if len(bits) != n:
        raise ValueError(f"expected {n} input bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"input must be a 0/1 vector, got {bits}")
    return bits


def input_bits(n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows are the inputs with indices ``start..stop-1`` as uint8 bit vectors."""
    stop = (1 << n) if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.uint8)


def index_of(x: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(x))


def bits_of(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> i) & 1 for i in range(n))


def bitstring(x: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in x)


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int
    value: int

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1


class IntervalList(tuple):
    """Maximal constant runs of a symmetric profile, in increasing order."""

    @property
    def ends(self) -> tuple[int, ...]:
        """Right endpoints ``I_1, ..., I_k`` of the runs."""
        return tuple(iv.hi for iv in self)

    def expand(self) -> tuple[int, ...]:
        out: list[int] = []
        for iv in self:
            out.extend([iv.value] * iv.length)
        return tuple(out)


@dataclass(frozen=True)
class SymmetricProfile:
    """Symmetric function given by its value at each popcount ``0..n``."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.n < 1:
            raise ValueError("a profile needs at least one input")
        if len(vals) != self.n + 1:
            raise ValueError(f"profile for n={self.n} needs {self.n + 1} values, got {len(vals)}")
        if any(v not in (0, 1) for v in vals):
            raise ValueError("profile values must be bits")

    @classmethod
    def of(cls, values: Sequence[int]) -> SymmetricProfile:
        return cls(len(values) - 1, tuple(values))

    def __call__(self, x: Sequence[int]) -> int:
        return eval_symmetric(self, x)

    def truth_table(self) -> np.ndarray:
        counts = input_bits(self.n).sum(axis=1)
        return np.asarray(self.values, dtype=np.uint8)[counts]

    def to_json(self) -> dict:
        return {"type": "symmetric", "n": self.n, "values": list(self.values)}


@dataclass(frozen=True)
class LinearThresholdFn:
    """``1{ sum(w_i x_i) >= threshold }`` with integer weights."""

    weights: tuple[int, ...]
    threshold: int

    def __post_init__(self):
        if any(int(x) != x for x in (*self.weights, self.threshold)):
            raise ValueError("threshold functions need integer weights and threshold")
        w = tuple(int(x) for x in self.weights)
        if not w:
            raise ValueError("weight vector must be non-empty")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "threshold", int(self.threshold))

    @property
    def n(self) -> int:
        return len(self.weights)

    def __call__(self, x: Sequence[int]) -> int:
        return eval_threshold(self, x)

    def sum_range(self) -> tuple[int, int]:
        """Smallest and largest achievable weighted sums over the cube."""
        lo = sum(w for w in self.weights if w < 0)
        hi = sum(w for w in self.weights if w > 0)
        return lo, hi

    def is_constant(self) -> bool:
        lo, hi = self.sum_range()
        return lo >= self.threshold or hi < self.threshold

    def truth_table(self) -> np.ndarray:
        out = np.empty(1 << self.n, dtype=np.uint8)
        w = np.asarray(self.weights, dtype=object if _big(self.weights) else np.int64)
        step = 1 << 16
        for start in range(0, 1 << self.n, step):
            stop = min(start + step, 1 << self.n)
            sums = input_bits(self.n, start, stop).astype(w.dtype) @ w
            out[start:stop] = sums >= self.threshold
        return out

    def to_json(self) -> dict:
        return {"type": "threshold", "weights": list(self.weights), "threshold": self.threshold}


def _big(weights) -> bool:
    return sum(abs(w) for w in weights) >= 2**62


@dataclass(frozen=True)
class TruthTable:
    """Arbitrary function stored as a 0/1 string in input-index order."""

    n: int
    bits: str

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative input count")
        if len(self.bits) != 1 << self.n:
            raise ValueError(f"truth table for n={self.n} needs {1 << self.n} bits")
        if set(self.bits) - {"0", "1"}:
            raise ValueError("truth table must contain only 0 and 1")

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[tuple[int, ...]], int]) -> TruthTable:
        return cls(n, "".join(str(int(fn(bits_of(i, n)))) for i in range(1 << n)))

    @classmethod
    def from_array(cls, n: int, table) -> TruthTable:
        return cls(n, "".join("1" if b else "0" for b in table))

    def __call__(self, x: Sequence[int]) -> int:
        return int(self.bits[index_of(_check_bits(x, self.n))])

    def truth_table(self) -> np.ndarray:
        return np.frombuffer(self.bits.encode(), dtype=np.uint8) - ord("0")

    def to_json(self) -> dict:
        return {"type": "truth_table", "n": self.n, "bits": self.bits}


BooleanFunction = Union[SymmetricProfile, LinearThresholdFn, TruthTable]


def truth_table(f: BooleanFunction) -> np.ndarray:
    return np.asarray(f.truth_table(), dtype=np.uint8)


def eval_symmetric(p: SymmetricProfile, x: Sequence[int]) -> int:
    return p.values[sum(_check_bits(x, p.n))]


def eval_threshold(t: LinearThresholdFn, x: Sequence[int]) -> int:
    bits = _check_bits(x, t.n)
    return int(sum(w * b for w, b in zip(t.weights, bits)) >= t.threshold)


def intervals(p: SymmetricProfile) -> IntervalList:
    runs = []
    lo = 0
    for k in range(1, p.n + 2):
        if k == p.n + 1 or p.values[k] != p.values[lo]:
            runs.append(Interval(lo, k - 1, p.values[lo]))
            lo = k
    return IntervalList(runs)


def interval_count(p: SymmetricProfile) -> int:
    return len(intervals(p))


def is_periodic(p: SymmetricProfile) -> int | None:
    """Common run length when every interval has the same length, else None."""
    lengths = {iv.length for iv in intervals(p)}
    return lengths.pop() if len(lengths) == 1 else None


def comp_function(n: int) -> LinearThresholdFn:
    """``1{bin(X) >= bin(Y)}`` on ``2n`` inputs ``(x_1..x_n, y_1..y_n)``."""
    if n < 1:
        raise ValueError("COMP needs n >= 1")
    powers = [1 << i for i in range(n)]
    return LinearThresholdFn(tuple(powers + [-p for p in powers]), 0)


def symmetric_threshold(n: int, b: int) -> SymmetricProfile:
    """Profile of ``1{|X| >= b}``."""
    if not 1 <= b <= n:
        raise ValueError(f"threshold must lie in [1, {n}], got {b}")
    return SymmetricProfile(n, tuple(int(k >= b) for k in range(n + 1)))


def parity(n: int) -> SymmetricProfile:
    return SymmetricProfile(n, tuple(k % 2 for k in range(n + 1)))


def constant(n: int, value: int) -> SymmetricProfile:
    return SymmetricProfile(n, (int(value),) * (n + 1))


def all_profiles(n: int) -> Iterator[SymmetricProfile]:
    """All ``2^(n+1)`` symmetric functions of ``n`` inputs, by integer code."""
    for code in range(1 << (n + 1)):
        yield SymmetricProfile(n, tuple((code >> k) & 1 for k in range(n + 1)))


def function_from_json(data: dict) -> BooleanFunction:
    kind = data.get("type")
    if kind == "symmetric":
        f = SymmetricProfile(int(data["n"]), tuple(data["values"]))
    elif kind == "threshold":
        f = LinearThresholdFn(tuple(data["weights"]), data["threshold"])
    elif kind == "truth_table":
        f = TruthTable(int(data["n"]), str(data["bits"]))
    else:
        raise ValueError(f"unknown function type {kind!r}")
    return f
