"""Exact rational scalars and matrices, plus the bit-resolution measure.

Scalars are :class:`fractions.Fraction`, which is always normalized to lowest
terms with a positive denominator. Matrices are small immutable row-major
grids of fractions; nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction


class RankDeficientError(ValueError):
    """Raised when a system that must have full row rank does not."""


def to_rational(value) -> Fraction:
    """Coerce ints, fractions and strings ("3/4", "-0.57", "2") to a Fraction.

    Floats are refused: a binary float almost never equals the decimal the
    user typed, and silently accepting one would break exactness.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string instead")
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _ceil_log2(k: int) -> int:
    # ceil(log2 k) for k >= 1
    return (k - 1).bit_length()


def res_of_rational(q: Fraction) -> int:
    """Bits needed for ``q = a/b``: ``ceil(max(log2(|a|+1), log2(|b|+1)))``."""
    q = Fraction(q)
    return max(_ceil_log2(abs(q.numerator) + 1), _ceil_log2(q.denominator + 1))


def res_of_matrix(entries) -> int:
    """Maximum resolution over all entries of a matrix (or anything iterable of rows)."""
    if isinstance(entries, RationalMatrix):
        entries = entries.entries
    best = 0
    for row in entries:
        for q in row:
            best = max(best, res_of_rational(q))
    return best


class RationalMatrix:
    """Immutable dense matrix of fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        grid = tuple(tuple(to_rational(x) for x in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", width)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def ones(cls, m: int, n: int) -> RationalMatrix:
        return cls([[1] * n for _ in range(m)])

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.eye(n, n)

    @classmethod
    def eye(cls, m: int, n: int) -> RationalMatrix:
        """First ``m`` rows of the ``n x n`` identity (requires ``m <= n``)."""
        return cls([[int(i == j) for j in range(n)] for i in range(m)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self.entries)
        return f"RationalMatrix([{body}])"

    @property
    def T(self) -> RationalMatrix:
        return RationalMatrix(zip(*self.entries))

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        self._same_shape(other)
        return RationalMatrix(
            [a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)
        )

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        self._same_shape(other)
        return RationalMatrix(
            [a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)
        )

    def scale(self, k) -> RationalMatrix:
        k = to_rational(k)
        return RationalMatrix([k * x for x in row] for row in self.entries)

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.entries))
            return RationalMatrix(
                [sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols]
                for row in self.entries
            )
        vec = tuple(to_rational(x) for x in other)
        if len(vec) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.entries)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.entries]

    @classmethod
    def from_json(cls, data) -> RationalMatrix:
        return cls(data)


def rank(entries) -> int:
    """Rank by fraction-free elimination on integer-scaled rows.

    Each elimination step cross-multiplies and then divides the row by its
    content (gcd), so entries stay integral and small.
    """
    if isinstance(entries, RationalMatrix):
        entries = entries.entries
    rows = []
    for row in entries:
        row = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in row))
        rows.append([int(x * scale) for x in row])
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        for i in range(r + 1, m):
            k = rows[i][c]
            if k == 0:
                continue
            new = [p * x - k * y for x, y in zip(rows[i], rows[r])]
            g = gcd(*new)
            rows[i] = [x // g for x in new] if g > 1 else new
        r += 1
        if r == m:
            break
    return r


def solve_square(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Gauss-Jordan solve of a nonsingular square system over the rationals."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise RankDeficientError("singular system")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                k = aug[i][c]
                aug[i] = [x - k * y for x, y in zip(aug[i], aug[c])]
    return tuple(row[n] for row in aug)


def _ones_plus_eps_denominator(m: int, n: int, eps: Fraction) -> Fraction:
    return m * (n - m) + (m + eps) ** 2


def ones_plus_eps(m: int, n: int, eps) -> RationalMatrix:
    """The ``m x n`` matrix of ones plus ``eps`` on the leading diagonal."""
    eps = to_rational(eps)
    return RationalMatrix([[1 + (eps if i == j else 0) for j in range(n)] for i in range(m)])


def pseudoinverse_ones_plus_eps(m: int, n: int, eps) -> RationalMatrix:
    """Closed-form Moore-Penrose pseudoinverse of :func:`ones_plus_eps`.

    With ``D = m(n-m) + (m+eps)^2`` the result is ``n x m``; its top ``m x m``
    block is ``I/eps - ((1 + n/eps)/D) * ones`` and the remaining ``(n-m)``
    rows are constant ``1/D``.
    """
    eps = to_rational(eps)
    if m < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    if m > n:
        raise ValueError(f"need m <= n, got m={m}, n={n}")
    if eps == 0:
        raise ValueError("eps must be nonzero")
    d = _ones_plus_eps_denominator(m, n, eps)
    if d == 0:
        raise ValueError(f"degenerate eps={eps}: m(n-m)+(m+eps)^2 vanishes")
    off = (1 + n / eps) / d
    top = [[(1 / eps if i == j else 0) - off for j in range(m)] for i in range(m)]
    bottom = [[1 / d] * m for _ in range(n - m)]
    return RationalMatrix(top + bottom)


def detect_ones_plus_eps(b: RationalMatrix) -> Fraction | None:
    """Return ``eps`` when ``b == ones_plus_eps(rows, cols, eps)`` with eps != 0."""
    if b.rows > b.cols:
        return None
    eps = b[0, 0] - 1
    if eps == 0:
        return None
    for i, row in enumerate(b.entries):
        for j, x in enumerate(row):
            if x != 1 + (eps if i == j else 0):
                return None
    return eps


def solve_full_row_rank(b: RationalMatrix, c: Sequence) -> tuple[Fraction, ...]:
    """Minimum-norm exact solution of ``b x = c`` for a full-row-rank ``b``.

    Uses the closed-form pseudoinverse when ``b`` has the ones-plus-eps shape,
    otherwise ``x = b^T (b b^T)^{-1} c``.
    """
    c = tuple(to_rational(x) for x in c)
    if len(c) != b.rows:
        raise ValueError(f"right-hand side has length {len(c)}, expected {b.rows}")
    r = rank(b)
    if r < b.rows:
        raise RankDeficientError(f"matrix has rank {r} < {b.rows} rows")
    eps = detect_ones_plus_eps(b)
    if eps is not None:
        return pseudoinverse_ones_plus_eps(b.rows, b.cols, eps) @ c
    gram = b @ b.T
    y = solve_square(gram.entries, c)
    return b.T @ y
