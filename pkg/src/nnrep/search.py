"""Brute-force oracles for small instances.

* minimal size over binary anchors (vertices of the cube),
* minimal size over anchors whose entries all have bounded resolution,
* exact linear-threshold recognition.

Searches run in increasing anchor count and lexicographic candidate order, and
every witness is re-verified before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice, product
from math import comb, lcm

import numpy as np

from .boolfn import BooleanFunction, bits_of, input_bits, parity, truth_table
from .lp import Separation, separate
from .nnrepr import Anchor, AnchorMatrix, verify_representation

FOUND = "found"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SearchBudget:
    max_anchors: int = 16
    max_resolution: int = 2
    max_candidates: int = 10_000_000

    def __post_init__(self):
        for name in ("max_anchors", "max_resolution", "max_candidates"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")

    def to_json(self) -> dict:
        return {
            "max_anchors": self.max_anchors,
            "max_resolution": self.max_resolution,
            "max_candidates": self.max_candidates,
        }

    @classmethod
    def from_json(cls, data: dict) -> SearchBudget:
        return cls(**{k: int(v) for k, v in data.items() if k in cls.__dataclass_fields__})


@dataclass
class SearchResult:
    status: str
    size: int | None
    witness: AnchorMatrix | None
    candidates: int
    scope: str

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "size": self.size,
            "scope": self.scope,
            "candidates": self.candidates,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _self_check(A: AnchorMatrix, f: BooleanFunction) -> AnchorMatrix:
    if not verify_representation(A, f).valid:
        raise RuntimeError("search produced a witness that does not verify")
    return A


def _valid_mask(pmin: np.ndarray, nmin: np.ndarray, table: np.ndarray) -> np.ndarray:
    # pmin/nmin: (..., inputs) smallest scaled distance to a positive/negative anchor
    ok = np.where(table == 1, pmin < nmin, nmin < pmin)
    return ok.all(axis=-1)


def bnn_exhaustive(f: BooleanFunction, budget: SearchBudget | None = None) -> SearchResult:
    """Smallest anchor set drawn from ``{0,1}^n`` that represents ``f``.

    An anchor placed on a vertex is the unique nearest anchor of that vertex, so
    its label is forced to ``f`` there; labeled subsets therefore reduce to
    plain subsets of the cube.
    """
    budget = budget or SearchBudget()
    n = f.n
    table = truth_table(f)
    total = 1 << n
    verts = input_bits(n).astype(np.int64)
    # squared distance between vertices = Hamming distance
    ham = (verts[:, None, :] != verts[None, :, :]).sum(axis=2)
    examined = 0
    chunk = 2048
    for m in range(1, min(budget.max_anchors, total) + 1):
        it = combinations(range(total), m)
        while True:
            block = list(islice(it, chunk))
            if not block:
                break
            if examined + len(block) > budget.max_candidates:
                return SearchResult(EXHAUSTED, None, None, examined, "binary")
            idx = np.array(block, dtype=np.int64)
            dist = ham[idx]  # (block, m, inputs)
            lab = table[idx]  # (block, m)
            big = n + 1
            pmin = np.where(lab[:, :, None] == 1, dist, big).min(axis=1)
            nmin = np.where(lab[:, :, None] == 0, dist, big).min(axis=1)
            hits = np.nonzero(_valid_mask(pmin, nmin, table))[0]
            if len(hits):
                first = int(hits[0])
                examined += first + 1
                combo = block[first]
                A = AnchorMatrix(
                    n, tuple(Anchor(bits_of(v, n), int(table[v])) for v in combo)
                )
                return SearchResult(FOUND, m, _self_check(A, f), examined, "binary")
            examined += len(block)
    return SearchResult(EXHAUSTED, None, None, examined, "binary")


def bnn_parity_check(n: int) -> int:
    """Binary-anchor complexity of PARITY on ``n <= 3`` inputs."""
    if not 1 <= n <= 3:
        raise ValueError("parity BNN check is limited to 1 <= n <= 3")
    res = bnn_exhaustive(parity(n), SearchBudget(max_anchors=1 << n))
    if res.status != FOUND:
        raise RuntimeError(f"binary search on parity({n}) did not finish")
    return res.size


def grid_values(max_resolution: int) -> list[Fraction]:
    """All rationals ``p/q`` of resolution at most ``max_resolution``, ascending."""
    top = (1 << max_resolution) - 1
    return sorted({Fraction(p, q) for p in range(-top, top + 1) for q in range(1, top + 1)})


def nn_grid_search(f: BooleanFunction, budget: SearchBudget | None = None) -> SearchResult:
    """Smallest representation whose entries all lie on the bounded-resolution grid.

    A found size is an upper bound on NN(f); its minimality holds only
    relative to the grid, which the result's ``scope`` records.
    """
    budget = budget or SearchBudget(max_anchors=3)
    n = f.n
    table = truth_table(f)
    values = grid_values(budget.max_resolution)
    scope = f"grid(r={budget.max_resolution})"
    npoints = len(values) ** n
    if npoints > budget.max_candidates:
        return SearchResult(EXHAUSTED, None, None, 0, scope)
    points = list(product(values, repeat=n))
    scale = lcm(*(v.denominator for v in values))
    ints = np.array([[int(x * scale) for x in p] for p in points], dtype=np.int64)
    bits = input_bits(n).astype(np.int64)
    # scale^2 * d^2 minus the shared scale^2 |X| term
    cost = (ints * ints).sum(axis=1)[:, None] - 2 * scale * (ints @ bits.T)

    if table.min() == table.max():
        A = AnchorMatrix(n, (Anchor(points[0], int(table[0])),))
        return SearchResult(FOUND, 1, _self_check(A, f), 1, scope)

    examined = 0
    cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def subsets(k):
        if k not in cache:
            combos = np.array(list(combinations(range(npoints), k)), dtype=np.int64).reshape(-1, k)
            cache[k] = (combos, cost[combos].min(axis=1))
        return cache[k]

    for m in range(2, budget.max_anchors + 1):
        for k in range(1, m):
            split = comb(npoints, k) * comb(npoints, m - k)
            if examined + split > budget.max_candidates:
                return SearchResult(EXHAUSTED, None, None, examined, scope)
            pos, pmin = subsets(k)
            neg, nmin = subsets(m - k)
            member = np.zeros((len(neg), npoints), dtype=bool)
            member[np.arange(len(neg))[:, None], neg] = True
            step = max(1, 2_000_000 // max(1, len(neg) * len(table)))
            for s in range(0, len(pos), step):
                ok = _valid_mask(pmin[s:s + step, None, :], nmin[None, :, :], table)
                ok &= ~member[:, pos[s:s + step]].any(axis=2).T
                hit = np.argwhere(ok)
                if len(hit):
                    pi, ni = (int(v) for v in hit[0])
                    examined += (s + pi) * len(neg) + ni + 1
                    anchors = [Anchor(points[i], 1) for i in pos[s + pi]]
                    anchors += [Anchor(points[i], 0) for i in neg[ni]]
                    A = AnchorMatrix(n, tuple(anchors))
                    return SearchResult(FOUND, m, _self_check(A, f), examined, scope)
            examined += split
    return SearchResult(EXHAUSTED, None, None, examined, scope)


def separability(f: BooleanFunction) -> Separation:
    if f.n > 12:
        raise ValueError("linear-threshold recognition is limited to n <= 12")
    return separate(truth_table(f), f.n)


def is_linear_threshold(f: BooleanFunction) -> tuple[tuple[int, ...], int] | None:
    """Integer ``(weights, threshold)`` with ``f = 1{w.X >= b}``, or None."""
    sep = separability(f)
    if not sep.separable:
        return None
    return sep.weights, sep.threshold
