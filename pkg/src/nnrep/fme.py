"""Exact Fourier-Motzkin elimination for systems of (mostly strict) linear inequalities.

Every derived row remembers the non-negative multipliers that produced it
from the input rows, so an infeasible system comes back with a certificate:
a combination whose coefficients all cancel and whose bound is contradictory.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactnum import format_rational, to_rational


@dataclass(frozen=True)
class Inequality:
    """``coeffs . x < bound`` (or ``<=`` when ``strict`` is False)."""

    coeffs: tuple[Fraction, ...]
    bound: Fraction
    strict: bool = True
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(to_rational(c) for c in self.coeffs))
        object.__setattr__(self, "bound", to_rational(self.bound))

    def lhs(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, x)), Fraction(0))

    def holds(self, x: Sequence[Fraction]) -> bool:
        v = self.lhs(x)
        return v < self.bound if self.strict else v <= self.bound

    def render(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i + 1}" for i in range(len(self.coeffs))]
        terms = []
        for c, name in zip(self.coeffs, names):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{format_rational(mag)}*"
            terms.append(f"{sign} {coef}{name}")
        body = " ".join(terms).lstrip("+ ") if terms else "0"
        if body.startswith("- "):
            body = "-" + body[2:]
        op = "<" if self.strict else "<="
        return f"{body} {op} {format_rational(self.bound)}"


@dataclass(frozen=True)
class Certificate:
    """Non-negative multipliers over the input rows that sum to ``0 < c`` with ``c <= 0``."""

    system: tuple[Inequality, ...]
    multipliers: tuple[Fraction, ...]

    def combined(self) -> Inequality:
        nvars = len(self.system[0].coeffs)
        coeffs = [Fraction(0)] * nvars
        bound = Fraction(0)
        strict = False
        for lam, row in zip(self.multipliers, self.system):
            if lam == 0:
                continue
            coeffs = [c + lam * r for c, r in zip(coeffs, row.coeffs)]
            bound += lam * row.bound
            strict = strict or row.strict
        return Inequality(tuple(coeffs), bound, strict, "combination")

    def is_valid(self) -> bool:
        if any(lam < 0 for lam in self.multipliers) or not any(self.multipliers):
            return False
        row = self.combined()
        if any(row.coeffs):
            return False
        return row.bound <= 0 if row.strict else row.bound < 0

    def lines(self, names: Sequence[str] | None = None) -> list[str]:
        out = []
        for lam, row in zip(self.multipliers, self.system):
            if lam:
                tag = f"[{row.label}] " if row.label else ""
                out.append(f"{format_rational(lam)} x ({tag}{row.render(names)})")
        out.append(f"sum: {self.combined().render(names)}")
        return out

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        return {
            "multipliers": [
                {"row": i, "label": row.label, "inequality": row.render(names),
                 "multiplier": format_rational(lam)}
                for i, (lam, row) in enumerate(zip(self.multipliers, self.system)) if lam
            ],
            "combined": self.combined().render(names),
        }


@dataclass
class FMResult:
    feasible: bool
    point: tuple[Fraction, ...] | None = None
    certificate: Certificate | None = None


@dataclass(frozen=True)
class _Row:
    coeffs: tuple[Fraction, ...]
    bound: Fraction
    strict: bool
    mults: tuple[Fraction, ...]


def _normalize(row: _Row) -> _Row:
    lead = next((abs(c) for c in row.coeffs if c != 0), None)
    if lead is None or lead == 1:
        return row
    k = 1 / lead
    return _Row(
        tuple(c * k for c in row.coeffs), row.bound * k, row.strict, tuple(m * k for m in row.mults)
    )


def _combine(p: _Row, q: _Row, v: int) -> _Row:
    a, b = p.coeffs[v], -q.coeffs[v]  # both positive
    return _normalize(
        _Row(
            tuple(b * x + a * y for x, y in zip(p.coeffs, q.coeffs)),
            b * p.bound + a * q.bound,
            p.strict or q.strict,
            tuple(b * x + a * y for x, y in zip(p.mults, q.mults)),
        )
    )


def _contradiction(row: _Row) -> bool:
    if any(row.coeffs):
        return False
    return row.bound <= 0 if row.strict else row.bound < 0


def _dedupe(rows: list[_Row]) -> list[_Row]:
    # identical left-hand sides: keep the tightest bound only
    best: dict[tuple, _Row] = {}
    for r in rows:
        if not any(r.coeffs) and not _contradiction(r):
            continue
        cur = best.get(r.coeffs)
        if cur is None or r.bound < cur.bound or (r.bound == cur.bound and r.strict and not cur.strict):
            best[r.coeffs] = r
    return list(best.values())


def solve(system: Sequence[Inequality], nvars: int | None = None) -> FMResult:
    """Decide feasibility exactly; return a point or an infeasibility certificate.

    Variables are eliminated last-to-first. The witness is rebuilt first-to-last,
    each coordinate at the midpoint of its open feasible interval.
    """
    system = tuple(system)
    if nvars is None:
        nvars = len(system[0].coeffs) if system else 0
    if any(len(s.coeffs) != nvars for s in system):
        raise ValueError("all inequalities need the same number of coefficients")
    k = len(system)
    rows = [
        _normalize(_Row(s.coeffs, s.bound, s.strict, tuple(Fraction(int(i == j)) for j in range(k))))
        for i, s in enumerate(system)
    ]
    stages = [rows]
    for v in reversed(range(nvars)):
        for r in rows:
            if _contradiction(r):
                return FMResult(False, certificate=Certificate(system, r.mults))
        pos = [r for r in rows if r.coeffs[v] > 0]
        neg = [r for r in rows if r.coeffs[v] < 0]
        keep = [r for r in rows if r.coeffs[v] == 0]
        rows = _dedupe(keep + [_combine(p, q, v) for p in pos for q in neg])
        stages.append(rows)
    for r in rows:
        if _contradiction(r):
            return FMResult(False, certificate=Certificate(system, r.mults))

    point: list[Fraction] = []
    for v in range(nvars):
        stage = stages[nvars - 1 - v]
        lo = hi = None
        for r in stage:
            c = r.coeffs[v]
            if c == 0:
                continue
            rest = r.bound - sum((a * x for a, x in zip(r.coeffs, point)), Fraction(0))
            val = rest / c
            if c > 0:
                hi = val if hi is None else min(hi, val)
            else:
                lo = val if lo is None else max(lo, val)
        if lo is not None and hi is not None:
            x = (lo + hi) / 2
        elif lo is not None:
            x = lo + 1
        elif hi is not None:
            x = hi - 1
        else:
            x = Fraction(0)
        point.append(x)
    point_t = tuple(point)
    if not all(s.holds(point_t) for s in system):
        raise RuntimeError("Fourier-Motzkin back-substitution produced an infeasible point")
    return FMResult(True, point=point_t)
