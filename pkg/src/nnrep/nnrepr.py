"""Anchor matrices, exact nearest-anchor classification, and condition checks.

All distance comparisons are exact. For bulk verification the anchors are
scaled by the common denominator ``L`` of their coordinates, so that
``L^2 * d(X, a_i)^2 = ||c_i||^2 - 2 L c_i.X + L^2 |X|`` with integer ``c_i``;
the last term is shared by every anchor and drops out of the comparison.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

import numpy as np

from .boolfn import (
    BooleanFunction,
    IntervalList,
    SymmetricProfile,
    bits_of,
    bitstring,
    input_bits,
    is_periodic,
    truth_table,
)
from .exactnum import RationalMatrix, format_rational, to_rational

WRONG_LABEL = "wrong-label"
CROSS_TIE = "cross-label-tie"

MAX_VERIFY_INPUTS = 30
WARN_VERIFY_INPUTS = 24
_CHUNK = 1 << 15


@dataclass(frozen=True)
class Anchor:
    coords: tuple[Fraction, ...]
    label: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_rational(x) for x in self.coords))
        if self.label not in (0, 1):
            raise ValueError(f"anchor label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class AnchorMatrix:
    """Labeled anchors in ``Q^n``; row order is significant for the checkers."""

    n: int
    anchors: tuple[Anchor, ...]

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        if not self.anchors:
            raise ValueError("need at least one anchor")
        for a in self.anchors:
            if len(a.coords) != self.n:
                raise ValueError(f"anchor has {len(a.coords)} coordinates, expected {self.n}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], labels: Sequence[int]) -> AnchorMatrix:
        rows = [tuple(to_rational(x) for x in r) for r in rows]
        if len(rows) != len(labels):
            raise ValueError("one label per row required")
        return cls(len(rows[0]), tuple(Anchor(r, int(l)) for r, l in zip(rows, labels)))

    @property
    def size(self) -> int:
        return len(self.anchors)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(a.label for a in self.anchors)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(a.coords for a in self.anchors)

    def matrix(self) -> RationalMatrix:
        return RationalMatrix(self.rows)

    def positives(self) -> list[int]:
        return [i for i, a in enumerate(self.anchors) if a.label == 1]

    def negatives(self) -> list[int]:
        return [i for i, a in enumerate(self.anchors) if a.label == 0]

    @cached_property
    def _integer_form(self):
        scale = lcm(*(x.denominator for a in self.anchors for x in a.coords))
        coords = [[int(x * scale) for x in a.coords] for a in self.anchors]
        norms = [sum(c * c for c in row) for row in coords]
        return scale, coords, norms

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "anchors": [
                {"label": a.label, "coords": [format_rational(x) for x in a.coords]}
                for a in self.anchors
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> AnchorMatrix:
        anchors = tuple(
            Anchor(tuple(to_rational(x) for x in a["coords"]), int(a["label"]))
            for a in data["anchors"]
        )
        n = int(data.get("n", len(anchors[0].coords) if anchors else 0))
        return cls(n, anchors)


@dataclass
class Failure:
    index: int
    reason: str


@dataclass
class VerificationReport:
    n: int
    valid: bool
    failures: list[Failure] = field(default_factory=list)
    failure_count: int = 0
    assignment: np.ndarray | None = None

    def to_json(self, max_failures: int | None = None) -> dict:
        shown = self.failures if max_failures is None else self.failures[:max_failures]
        return {
            "valid": self.valid,
            "n": self.n,
            "failure_count": self.failure_count,
            "failures": [
                {"input": bitstring(bits_of(f.index, self.n)), "reason": f.reason} for f in shown
            ],
            "assignment": None if self.assignment is None else [int(v) for v in self.assignment],
        }


def squared_distance(a: Sequence[Fraction], x: Sequence[int]) -> Fraction:
    return sum(((ai - xi) ** 2 for ai, xi in zip(a, x)), Fraction(0))


def nearest_anchor(A: AnchorMatrix, x: Sequence[int]) -> tuple[int, bool]:
    """Index of the closest anchor and whether an opposite-label anchor ties it.

    Same-label ties go to the lowest index.
    """
    x = tuple(int(b) for b in x)
    if len(x) != A.n:
        raise ValueError(f"input has {len(x)} bits, anchors live in dimension {A.n}")
    dists = [squared_distance(a.coords, x) for a in A.anchors]
    best = min(dists)
    winner = dists.index(best)
    tied_labels = {A.anchors[i].label for i, d in enumerate(dists) if d == best}
    return winner, len(tied_labels) > 1


def classify_block(A: AnchorMatrix, start: int, stop: int):
    """Winner index, winning label and cross-label-tie flag for a block of inputs."""
    scale, coords, norms = A._integer_form
    bits = input_bits(A.n, start, stop)
    bound = max(abs(v) for v in norms) + 2 * scale * max(
        (sum(abs(c) for c in row) for row in coords), default=0
    )
    dtype = np.int64 if bound < 2**62 else object
    c = np.array(coords, dtype=dtype).reshape(A.size, A.n)
    nv = np.array(norms, dtype=dtype)
    scores = nv[None, :] - 2 * scale * (bits.astype(dtype) @ c.T)
    winner = np.argmin(scores, axis=1)
    labels = np.array(A.labels)
    pos = labels == 1
    if pos.all() or not pos.any():
        lab = np.full(len(bits), labels[0], dtype=np.uint8)
        tie = np.zeros(len(bits), dtype=bool)
        return winner, lab, tie
    best_pos = scores[:, pos].min(axis=1)
    best_neg = scores[:, ~pos].min(axis=1)
    lab = (best_pos < best_neg).astype(np.uint8)
    tie = best_pos == best_neg
    return winner, lab, tie


def verify_representation(
    A: AnchorMatrix,
    f: BooleanFunction,
    *,
    jobs: int = 1,
    max_failures: int | None = None,
) -> VerificationReport:
    """Exhaustively check that ``A`` represents ``f`` over ``{0,1}^n``."""
    if A.n != f.n:
        raise ValueError(f"anchors have dimension {A.n} but the function has {f.n} inputs")
    if A.n > MAX_VERIFY_INPUTS:
        raise ValueError(f"exhaustive verification is limited to n <= {MAX_VERIFY_INPUTS}")
    if A.n > WARN_VERIFY_INPUTS:
        warnings.warn(f"verifying 2^{A.n} inputs; this will be slow", stacklevel=2)
    table = truth_table(f)
    total = 1 << A.n
    blocks = [(s, min(s + _CHUNK, total)) for s in range(0, total, _CHUNK)]

    def run(block):
        s, e = block
        winner, lab, tie = classify_block(A, s, e)
        bad_tie = np.nonzero(tie)[0]
        bad_label = np.nonzero(~tie & (lab != table[s:e]))[0]
        fails = sorted(
            [(s + int(i), CROSS_TIE) for i in bad_tie] + [(s + int(i), WRONG_LABEL) for i in bad_label]
        )
        return winner, fails

    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(b) for b in blocks]

    failures: list[Failure] = []
    count = 0
    for _, fails in results:
        count += len(fails)
        for idx, reason in fails:
            if max_failures is None or len(failures) < max_failures:
                failures.append(Failure(idx, reason))
    valid = count == 0
    assignment = np.concatenate([w for w, _ in results]).astype(np.int64) if valid else None
    return VerificationReport(A.n, valid, failures, count, assignment)


def max_subset_sum(b: Sequence, t: int) -> Fraction:
    """Largest sum of ``t`` entries of ``b`` (max of ``b.X`` over ``|X| = t``)."""
    b = [to_rational(x) for x in b]
    if not 0 <= t <= len(b):
        raise ValueError(f"subset size {t} outside [0, {len(b)}]")
    return sum(sorted(b, reverse=True)[:t], Fraction(0))


def min_subset_sum(b: Sequence, t: int) -> Fraction:
    """Smallest sum of ``t`` entries of ``b``."""
    b = [to_rational(x) for x in b]
    if not 0 <= t <= len(b):
        raise ValueError(f"subset size {t} outside [0, {len(b)}]")
    return sum(sorted(b)[:t], Fraction(0))


def check_monotonicity(A: AnchorMatrix) -> bool:
    """Every coordinate strictly increases from each anchor to the next."""
    rows = A.rows
    return all(
        all(x > y for x, y in zip(cur, prev)) for prev, cur in zip(rows, rows[1:])
    )


def ns_violations(A: AnchorMatrix, iv: IntervalList) -> list[int]:
    """Rows ``i >= 1`` (0-based) where the consecutive-anchor condition fails.

    For anchor pair ``(i-1, i)`` with ``t`` the right end of interval ``i-1``
    and ``d = a_i - a_{i-1}``, the condition is
    ``max_{|X|=t} d.X < (||a_i||^2 - ||a_{i-1}||^2)/2 < min_{|X|=t+1} d.X``.
    """
    if A.size != len(iv):
        raise ValueError(f"{A.size} anchors for {len(iv)} intervals")
    bad = []
    rows = A.rows
    for i in range(1, A.size):
        prev, cur = rows[i - 1], rows[i]
        diff = [x - y for x, y in zip(cur, prev)]
        mid = sum((x * x - y * y for x, y in zip(cur, prev)), Fraction(0)) / 2
        t = iv[i - 1].hi
        if not max_subset_sum(diff, t) < mid < min_subset_sum(diff, t + 1):
            bad.append(i)
    return bad


def check_ns_condition(A: AnchorMatrix, iv: IntervalList) -> bool:
    """Necessary and sufficient test for an interval-anchor assignment.

    Labels must also match the interval values: the inequalities alone only
    fix which anchor wins each popcount, not what it outputs.
    """
    if A.size != len(iv):
        raise ValueError(f"{A.size} anchors for {len(iv)} intervals")
    if any(a.label != seg.value for a, seg in zip(A.anchors, iv)):
        return False
    return not ns_violations(A, iv)


def _require_valid(report: VerificationReport):
    if not report.valid or report.assignment is None:
        raise ValueError("this check needs a valid verification report")


def check_separation(A: AnchorMatrix, report: VerificationReport) -> bool:
    """Each opposite-label anchor pair's bisector strictly splits their inputs.

    For positive ``a`` and negative ``b`` the inputs won by ``a`` satisfy
    ``2(a-b).X > ||a||^2 - ||b||^2`` and those won by ``b`` the reverse. Computed
    with plain fractions, independently of the vectorized verifier.
    """
    _require_valid(report)
    won: dict[int, list[tuple[int, ...]]] = {}
    for idx, w in enumerate(report.assignment):
        won.setdefault(int(w), []).append(bits_of(idx, A.n))
    norms = [sum((x * x for x in a.coords), Fraction(0)) for a in A.anchors]
    for i in A.positives():
        for j in A.negatives():
            a, b = A.anchors[i].coords, A.anchors[j].coords
            normal = [2 * (x - y) for x, y in zip(a, b)]
            offset = norms[i] - norms[j]

            def side(x):
                return sum((c for c, bit in zip(normal, x) if bit), Fraction(0)) - offset

            if any(side(x) <= 0 for x in won.get(i, ())):
                return False
            if any(side(x) >= 0 for x in won.get(j, ())):
                return False
    return True


def check_periodic_condition(
    A: AnchorMatrix,
    f: SymmetricProfile,
    period: int,
    report: VerificationReport | None = None,
) -> bool:
    """The anchor with the largest sum over the first ``period`` coordinates
    never wins an input whose first ``period`` bits are all zero."""
    if is_periodic(f) != period:
        raise ValueError(f"function is not periodic with period {period}")
    if report is None:
        report = verify_representation(A, f)
    _require_valid(report)
    if period > A.n:
        return True
    sums = [sum(a.coords[:period], Fraction(0)) for a in A.anchors]
    top = sums.index(max(sums))
    mask = (1 << period) - 1
    idx = np.arange(1 << A.n)
    hits = (report.assignment == top) & ((idx & mask) == 0)
    return not bool(hits.any())


def permute_columns(A: AnchorMatrix, sigma: Sequence[int]) -> AnchorMatrix:
    """Reorder coordinates so that new coordinate ``j`` is old coordinate ``sigma[j]``."""
    sigma = [int(s) for s in sigma]
    if sorted(sigma) != list(range(A.n)):
        raise ValueError(f"{sigma} is not a permutation of range({A.n})")
    return AnchorMatrix(
        A.n, tuple(Anchor(tuple(a.coords[s] for s in sigma), a.label) for a in A.anchors)
    )


def is_interval_assignment(report: VerificationReport, iv: IntervalList) -> bool:
    """One dedicated winning anchor per interval, distinct across intervals."""
    _require_valid(report)
    counts = input_bits(report.n).sum(axis=1)
    seen = set()
    for seg in iv:
        winners = np.unique(report.assignment[(counts >= seg.lo) & (counts <= seg.hi)])
        if len(winners) != 1:
            return False
        w = int(winners[0])
        if w in seen:
            return False
        seen.add(w)
    return True
