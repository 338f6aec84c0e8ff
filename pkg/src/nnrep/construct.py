"""Constructions of NN representations for symmetric and threshold functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fme
from .boolfn import LinearThresholdFn, SymmetricProfile, intervals
from .exactnum import (
    format_rational,
    ones_plus_eps,
    solve_full_row_rank,
    to_rational,
)
from .nnrepr import Anchor, AnchorMatrix, max_subset_sum, min_subset_sum, ns_violations

HALF = Fraction(1, 2)


class ConstructionError(RuntimeError):
    """The interval construction produced anchors that break the interval condition.

    ``rows`` lists the offending consecutive-anchor rows (0-based index of the
    later anchor). Reachable only with an ``eps`` that is too large.
    """

    def __init__(self, message: str, rows: Sequence[int]):
        super().__init__(message)
        self.rows = list(rows)


class ConstantFunctionError(ValueError):
    """A construction that needs a non-constant function received a constant one."""


@dataclass(frozen=True)
class ConstructionParams:
    eps: Fraction = HALF
    lambdas: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        eps = to_rational(self.eps)
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}")
        object.__setattr__(self, "eps", eps)
        if self.lambdas is not None:
            lams = tuple(to_rational(x) for x in self.lambdas)
            if any(not 0 < x < 1 for x in lams):
                raise ValueError("every lambda must lie strictly between 0 and 1")
            object.__setattr__(self, "lambdas", lams)

    def lambdas_for(self, m: int) -> tuple[Fraction, ...]:
        if self.lambdas is None:
            return (HALF,) * m
        if len(self.lambdas) != m:
            raise ValueError(f"need {m} lambdas, got {len(self.lambdas)}")
        return self.lambdas

    def to_json(self) -> dict:
        out = {"eps": format_rational(self.eps)}
        if self.lambdas is not None:
            out["lambdas"] = [format_rational(x) for x in self.lambdas]
        return out

    @classmethod
    def from_json(cls, data: dict) -> ConstructionParams:
        lams = data.get("lambdas")
        return cls(
            eps=to_rational(data.get("eps", HALF)),
            lambdas=None if lams is None else tuple(to_rational(x) for x in lams),
        )


def _constant_anchor(p: SymmetricProfile) -> AnchorMatrix:
    return AnchorMatrix(p.n, (Anchor((HALF,) * p.n, p.values[0]),))


def _uniform(n: int, value: Fraction, label: int) -> Anchor:
    return Anchor((value,) * n, label)


def parity_based(p: SymmetricProfile) -> AnchorMatrix:
    """One anchor per popcount ``k``, all coordinates ``k/n``."""
    return AnchorMatrix(
        p.n, tuple(_uniform(p.n, Fraction(k, p.n), p.values[k]) for k in range(p.n + 1))
    )


def parity_extension_system(p: SymmetricProfile) -> list[fme.Inequality]:
    """Strict inequalities on uniform anchor levels ``alpha_1..alpha_k``.

    One anchor per interval with all coordinates equal to ``alpha_i``; the
    interval condition reduces to ``alpha_i < alpha_{i+1}`` and
    ``2 I_i / n < alpha_i + alpha_{i+1} < 2 (I_i + 1) / n``.
    """
    iv = intervals(p)
    k = len(iv)
    rows = []

    def unit(*pairs):
        c = [Fraction(0)] * k
        for idx, val in pairs:
            c[idx] = Fraction(val)
        return tuple(c)

    for i in range(k - 1):
        rows.append(fme.Inequality(unit((i, 1), (i + 1, -1)), 0, True, f"a{i + 1} < a{i + 2}"))
    for i in range(k - 1):
        end = iv[i].hi
        lo = Fraction(2 * end, p.n)
        hi = Fraction(2 * (end + 1), p.n)
        rows.append(fme.Inequality(
            unit((i, -1), (i + 1, -1)), -lo, True,
            f"a{i + 1} + a{i + 2} > {format_rational(lo)}",
        ))
        rows.append(fme.Inequality(
            unit((i, 1), (i + 1, 1)), hi, True,
            f"a{i + 1} + a{i + 2} < {format_rational(hi)}",
        ))
    return rows


def parity_extension_solve(p: SymmetricProfile) -> fme.FMResult:
    return fme.solve(parity_extension_system(p), len(intervals(p)))


def parity_extension(p: SymmetricProfile) -> AnchorMatrix | None:
    """Uniform-entry anchors, one per interval, or None when none exist."""
    iv = intervals(p)
    if len(iv) == 1:
        return _constant_anchor(p)
    res = parity_extension_solve(p)
    if not res.feasible:
        return None
    return AnchorMatrix(p.n, tuple(_uniform(p.n, a, seg.value) for a, seg in zip(res.point, iv)))


def interval_rhs(b_rows: Sequence[Sequence[Fraction]], ends: Sequence[int], lambdas: Sequence[Fraction]):
    """Right-hand side ``c`` of ``B a_1 = c`` that places each bisector between
    the extreme subset sums on either side of its interval boundary."""
    c = []
    n = len(b_rows[0])
    running = [Fraction(0)] * n
    for i, (b, t, lam) in enumerate(zip(b_rows, ends, lambdas)):
        running = [r + x for r, x in zip(running, b)]
        ci = (
            sum((x * x for x in b), Fraction(0)) / 2
            - sum((x * r for x, r in zip(b, running)), Fraction(0))
            + lam * max_subset_sum(b, t)
            + (1 - lam) * min_subset_sum(b, t + 1)
        )
        c.append(ci)
    return tuple(c)


def interval_construction(
    p: SymmetricProfile, params: ConstructionParams | None = None, *, validate: bool = True
) -> AnchorMatrix:
    """``I(f)`` anchors whose successive differences are the rows of ``ones + eps*I``.

    With ``validate=False`` the interval condition is not re-checked, which
    lets tests look at what an oversized ``eps`` produces.
    """
    params = params or ConstructionParams()
    iv = intervals(p)
    if len(iv) == 1:
        return _constant_anchor(p)
    m = len(iv) - 1
    b = ones_plus_eps(m, p.n, params.eps)
    c = interval_rhs(b.entries, iv.ends[:m], params.lambdas_for(m))
    rows = [solve_full_row_rank(b, c)]
    for i in range(m):
        rows.append(tuple(x + y for x, y in zip(rows[-1], b.row(i))))
    A = AnchorMatrix(p.n, tuple(Anchor(r, seg.value) for r, seg in zip(rows, iv)))
    bad = ns_violations(A, iv) if validate else []
    if bad:
        raise ConstructionError(
            f"eps={params.eps} too large: interval condition fails at anchor rows {bad}", bad
        )
    return A


def _crossing_pair(t: LinearThresholdFn) -> tuple[list[int], int]:
    """Input ``X'`` and coordinate ``k`` with ``w.X' < b - 1/2 < w.X''``, where
    ``X''`` is ``X'`` with bit ``k`` flipped."""
    w = t.weights
    x = [1 if wi < 0 else 0 for wi in w]
    s = sum(wi for wi in w if wi < 0)
    target = t.threshold - HALF
    order = sorted((i for i in range(t.n) if w[i] != 0), key=lambda i: (-abs(w[i]), i))
    for k in order:
        nxt = s + abs(w[k])
        if s < target < nxt:
            return x, k
        x[k] ^= 1
        s = nxt
    raise ConstantFunctionError(f"threshold function is constant: {t}")


def lt_two_anchor(t: LinearThresholdFn, scale=None) -> AnchorMatrix:
    """Two anchors ``x* -/+ c w`` mirrored across the hyperplane ``w.x = b - 1/2``.

    ``x*`` is a binary input with one coordinate moved onto the hyperplane.
    Any ``c > 0`` gives a valid representation; by default ``c = 1/|w_k|`` for
    the moved coordinate ``k``, which keeps every entry within two bits of the
    weight resolution. Pass ``scale=1`` for the unscaled mirror pair.
    """
    if t.is_constant():
        raise ConstantFunctionError(f"threshold function is constant: {t}")
    x, k = _crossing_pair(t)
    w = t.weights
    s = sum(wi * xi for wi, xi in zip(w, x))
    star = [Fraction(xi) for xi in x]
    star[k] = x[k] + (t.threshold - HALF - s) / w[k]
    c = Fraction(1, abs(w[k])) if scale is None else to_rational(scale)
    if c <= 0:
        raise ValueError("scale must be positive")
    a1 = tuple(xs - c * wi for xs, wi in zip(star, w))
    a2 = tuple(xs + c * wi for xs, wi in zip(star, w))
    return AnchorMatrix(t.n, (Anchor(a1, 0), Anchor(a2, 1)))


def symmetric_lt_anchor(n: int, b: int) -> AnchorMatrix:
    """Constant-resolution pair for ``1{|X| >= b}``."""
    if not 1 <= b <= n:
        raise ValueError(f"threshold must lie in [1, {n}], got {b}")
    lead, rest = b - 1, n - b
    a1 = (Fraction(0),) * lead + (-HALF,) + (Fraction(-1),) * rest
    a2 = (Fraction(2),) * lead + (Fraction(3, 2),) + (Fraction(1),) * rest
    return AnchorMatrix(n, (Anchor(a1, 0), Anchor(a2, 1)))
