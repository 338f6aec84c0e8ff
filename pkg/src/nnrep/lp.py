"""Exact strict linear separation of two labeled point sets in {0,1}^n.

We look for ``v = (w, theta)`` with ``s_X (w.X - theta) >= 1`` for every input,
``s_X = +1`` on true points and ``-1`` on false points. Its LP dual is

    max sum(lam)  s.t.  sum_X lam_X s_X (X, -1) = 0,  lam >= 0.

The dual is degenerate at the origin, so it is either bounded with optimum 0,
in which case the simplex multipliers are a feasible ``v``, or unbounded, in
which case the ray is a convex combination of true points equal to one of
false points. A revised simplex with Bland's rule runs entirely over fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .boolfn import input_bits


@dataclass
class Separation:
    separable: bool
    weights: tuple[int, ...] | None = None
    threshold: int | None = None
    # when not separable: {input index: weight} with equal true/false mass and
    # equal weighted centroids
    overlap: dict[int, Fraction] | None = None
    pivots: int = 0


MAX_PIVOTS = 200_000


def _integer_matvec(g: np.ndarray, y: list[Fraction]) -> tuple[np.ndarray, int]:
    scale = lcm(*(q.denominator for q in y))
    ints = [int(q * scale) for q in y]
    big = max(abs(v) for v in ints) * g.shape[1] >= 2**62
    vec = np.array(ints, dtype=object if big else np.int64)
    return (g.astype(vec.dtype) @ vec), scale


def separate(table: np.ndarray, n: int) -> Separation:
    """Decide whether the true and false inputs of a truth table are linearly separable."""
    table = np.asarray(table, dtype=np.int64)
    if table.min() == table.max():
        # constant: all-zero weights with a threshold on the right side of 0
        return Separation(True, (0,) * n, 0 if table[0] else 1)
    signs = np.where(table == 1, 1, -1)
    bits = input_bits(n).astype(np.int64)
    g = np.concatenate([bits, -np.ones((len(bits), 1), dtype=np.int64)], axis=1) * signs[:, None]
    m = n + 1
    total = len(g)
    # basis entries >= total are artificial columns e_(id - total)
    basis = [total + i for i in range(m)]
    binv = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    pivots = 0
    while True:
        y = [sum((Fraction(1) * binv[r][c] for r, b in enumerate(basis) if b < total), Fraction(0))
             for c in range(m)]
        vals, scale = _integer_matvec(g, y)
        entering_candidates = np.nonzero(vals < scale)[0]
        if len(entering_candidates) == 0:
            return _separator(y, table, bits, pivots)
        j = int(entering_candidates[0])
        col = [int(v) for v in g[j]]
        d = [sum((binv[r][c] * col[c] for c in range(m) if col[c]), Fraction(0)) for r in range(m)]
        art = [r for r in range(m) if basis[r] >= total and d[r] != 0]
        if art:
            leave = min(art, key=lambda r: basis[r])
        else:
            blocking = [r for r in range(m) if basis[r] < total and d[r] > 0]
            if not blocking:
                return _overlap(basis, d, j, total, table, bits, pivots)
            leave = min(blocking, key=lambda r: basis[r])
        piv = d[leave]
        binv[leave] = [x / piv for x in binv[leave]]
        for r in range(m):
            if r != leave and d[r] != 0:
                k = d[r]
                binv[r] = [x - k * z for x, z in zip(binv[r], binv[leave])]
        basis[leave] = j
        pivots += 1
        if pivots > MAX_PIVOTS:
            raise RuntimeError("simplex pivot limit exceeded")


def _separator(y, table, bits, pivots) -> Separation:
    n = bits.shape[1]
    scale = lcm(*(q.denominator for q in y))
    ints = [int(q * scale) for q in y]
    w, theta = ints[:n], ints[n]
    # true: w.X >= theta + scale, false: w.X <= theta - scale
    g = gcd(*w)
    if g > 1:
        w = [v // g for v in w]
        b = (theta - scale) // g + 1
    else:
        b = theta - scale + 1
    sums = bits @ np.array(w, dtype=object if max(map(abs, w)) >= 2**40 else np.int64)
    if not np.array_equal((sums >= b).astype(np.int64), table):
        raise RuntimeError("separating hyperplane failed exact re-check")
    return Separation(True, tuple(int(v) for v in w), int(b), pivots=pivots)


def _overlap(basis, d, j, total, table, bits, pivots) -> Separation:
    ray = {j: Fraction(1)}
    for r, b in enumerate(basis):
        if b < total and d[r] != 0:
            ray[b] = ray.get(b, Fraction(0)) - d[r]
    ray = {k: v for k, v in ray.items() if v != 0}
    if any(v < 0 for v in ray.values()):
        raise RuntimeError("unbounded ray has a negative component")
    mass = {1: Fraction(0), 0: Fraction(0)}
    centroid = {1: [Fraction(0)] * bits.shape[1], 0: [Fraction(0)] * bits.shape[1]}
    for idx, lam in ray.items():
        lbl = int(table[idx])
        mass[lbl] += lam
        centroid[lbl] = [c + lam * int(x) for c, x in zip(centroid[lbl], bits[idx])]
    if mass[1] != mass[0] or centroid[1] != centroid[0] or mass[1] == 0:
        raise RuntimeError("overlap certificate failed exact re-check")
    return Separation(False, overlap=dict(sorted(ray.items())), pivots=pivots)
