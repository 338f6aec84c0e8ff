"""Regression registry of the published worked examples.

Each check returns ``(passed, details)``; details are JSON-ready. IDs are
stable and used by ``nnrep reproduce``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .boolfn import SymmetricProfile, intervals, parity, symmetric_threshold
from .circuit import nn_to_circuit, circuit_equiv_check
from .construct import interval_construction, parity_based, parity_extension, parity_extension_solve
from .exactnum import format_rational, res_of_matrix
from .nnrepr import AnchorMatrix, check_ns_condition, is_interval_assignment, verify_representation
from .search import SearchBudget, bnn_exhaustive, nn_grid_search, is_linear_threshold

AND2 = SymmetricProfile(2, (0, 0, 1))
OR2 = SymmetricProfile(2, (0, 1, 1))
XOR2 = SymmetricProfile(2, (0, 1, 0))
SIX_ROW = SymmetricProfile(5, (0, 0, 1, 1, 1, 0))
NO_EXTENSION = SymmetricProfile(8, (1, 0, 1, 1, 1, 1, 1, 0, 1))
SHARED_MIDDLE = SymmetricProfile(5, (0, 1, 1, 1, 1, 0))

H = Fraction(1, 2)


def _m(rows, labels) -> AnchorMatrix:
    return AnchorMatrix.from_rows([[Fraction(str(x)) for x in r] for r in rows], labels)


FIG_AND = _m([[H, H], [1, 1]], [0, 1])
FIG_OR = _m([[0, 0], [H, H]], [0, 1])
FIG_XOR = _m([[0, 0], [H, H], [1, 1]], [0, 1, 0])
FIG_XOR_BNN = _m([[0, 0], [0, 1], [1, 0], [1, 1]], [0, 1, 1, 0])
FIG_AND_PARITY = _m([[0, 0], [H, H], [1, 1]], [0, 0, 1])
FIG_OR_PARITY = _m([[0, 0], [H, H], [1, 1]], [0, 1, 1])
SIX_ROW_PARITY = _m([[k / 5] * 5 for k in range(6)], [0, 0, 1, 1, 1, 0])
SIX_ROW_EXTENSION = _m([["0.1"] * 5, ["0.6"] * 5, ["1.1"] * 5], [0, 1, 0])
# printed to two decimals
NO_EXTENSION_PRINTED = _m(
    [
        ["17.78", "2.28", "-5.72", "-21.22", "-1.53", "-1.53", "-1.53", "-1.53"],
        ["19.28", "3.28", "-4.72", "-20.22", "-0.53", "-0.53", "-0.53", "-0.53"],
        ["20.28", "4.78", "-3.72", "-19.22", "0.47", "0.47", "0.47", "0.47"],
        ["21.28", "5.78", "-2.22", "-18.22", "1.47", "1.47", "1.47", "1.47"],
        ["22.28", "6.78", "-1.22", "-16.72", "2.47", "2.47", "2.47", "2.47"],
    ],
    [1, 0, 1, 0, 1],
)
SHARED_MIDDLE_PRINTED = _m(
    [["0", "0.57", "0.57", "0.57", "0.57"], ["0.5"] * 5, ["1", "0.43", "0.43", "0.43", "0.43"]],
    [1, 0, 1],
)


def _valid(A, f) -> bool:
    return verify_representation(A, f).valid


def _fig1(A, f, gates):
    def check():
        ok = _valid(A, f)
        c = nn_to_circuit(A)
        return ok and c.gate_count == gates and circuit_equiv_check(c, f), {
            "valid": ok, "gates": c.gate_count, "expected_gates": gates,
        }
    return check


def fig2_xor_bnn():
    ok = _valid(FIG_XOR_BNN, XOR2)
    res = bnn_exhaustive(XOR2)
    grid3 = nn_grid_search(XOR2, SearchBudget(max_anchors=3, max_resolution=2))
    sep = is_linear_threshold(XOR2)
    passed = ok and res.size == 4 and grid3.size == 3 and sep is None
    return passed, {
        "printed_valid": ok,
        "bnn": res.size,
        "grid_min_size": grid3.size,
        "grid_scope": grid3.scope,
        "linear_threshold": sep is not None,
    }


def _fig3(p, printed):
    def check():
        A = parity_based(p)
        return A == printed and _valid(A, p), {"matches_printed": A == printed, "valid": _valid(A, p)}
    return check


def eq1_parity_based():
    A = parity_based(SIX_ROW)
    return A == SIX_ROW_PARITY and _valid(A, SIX_ROW), {
        "matches_printed": A == SIX_ROW_PARITY, "anchors": A.size,
    }


def eq2_intervals():
    iv = intervals(SIX_ROW)
    ends = list(iv.ends)
    A = interval_construction(SIX_ROW)
    rep = verify_representation(A, SIX_ROW)
    assigned = rep.valid and is_interval_assignment(rep, iv)
    # anchor per popcount: a1 for 0..1, a2 for 2..4, a3 for 5
    by_count = {}
    if rep.valid:
        for x, w in enumerate(rep.assignment):
            by_count.setdefault(bin(x).count("1"), set()).add(int(w))
    expected = {0: {0}, 1: {0}, 2: {1}, 3: {1}, 4: {1}, 5: {2}}
    passed = ends == [1, 4, 5] and assigned and by_count == expected
    return passed, {"ends": ends, "interval_assignment": assigned}


def eq3_parity_extension():
    ok = _valid(SIX_ROW_EXTENSION, SIX_ROW)
    ns = check_ns_condition(SIX_ROW_EXTENSION, intervals(SIX_ROW))
    ours = parity_extension(SIX_ROW)
    ours_ok = ours is not None and _valid(ours, SIX_ROW)
    return ok and ns and ours_ok, {
        "printed_valid": ok,
        "ns_condition": ns,
        "witness": None if ours is None else [format_rational(a.coords[0]) for a in ours.anchors],
    }


def eq25_counterexample():
    A = interval_construction(NO_EXTENSION)
    ok = _valid(A, NO_EXTENSION)
    same_shape = A.size == NO_EXTENSION_PRINTED.size and A.labels == NO_EXTENSION_PRINTED.labels
    dev = max(
        abs(x - y)
        for a, b in zip(A.anchors, NO_EXTENSION_PRINTED.anchors)
        for x, y in zip(a.coords, b.coords)
    )
    passed = ok and same_shape and dev <= Fraction(1, 100)
    return passed, {
        "valid": ok,
        "max_deviation": f"{float(dev):.6f}",
        "tolerance": "0.01",
        "resolution": res_of_matrix(A.rows),
    }


def eq26_infeasible():
    res = parity_extension_solve(NO_EXTENSION)
    names = [f"a{i + 1}" for i in range(len(intervals(NO_EXTENSION)))]
    cert_ok = res.certificate is not None and res.certificate.is_valid()
    return (not res.feasible) and cert_ok, {
        "feasible": res.feasible,
        "certificate": None if res.certificate is None else res.certificate.lines(names),
    }


def eq37_shared_interval():
    rep = verify_representation(SHARED_MIDDLE_PRINTED, SHARED_MIDDLE)
    interval = rep.valid and is_interval_assignment(rep, intervals(SHARED_MIDDLE))
    c = nn_to_circuit(SHARED_MIDDLE_PRINTED)
    eq = circuit_equiv_check(c, SHARED_MIDDLE)
    passed = rep.valid and not interval and c.gate_count == 5 and eq
    return passed, {
        "valid": rep.valid, "interval_assignment": interval, "gates": c.gate_count, "equivalent": eq,
    }


def thm1_nn_parity():
    sizes = {}
    ok = True
    for n in range(1, 9):
        A = parity_based(parity(n))
        ok &= A.size == n + 1 and _valid(A, parity(n))
        sizes[str(n)] = A.size
    return ok, {"sizes": sizes}


def _thm1_bnn(n):
    def check():
        res = bnn_exhaustive(parity(n), SearchBudget(max_anchors=1 << n))
        return res.size == 1 << n, {"bnn": res.size, "expected": 1 << n}
    return check


def thm2_small_cases():
    out = {}
    ok = True
    for n in (1, 3, 5):
        f = symmetric_threshold(n, (n + 1) // 2)
        size = bnn_exhaustive(f, SearchBudget(max_anchors=2)).size
        ok &= size == 2
        out[f"odd n={n}"] = size
    for n in (2, 4):
        f = symmetric_threshold(n, n // 2)
        size = bnn_exhaustive(f, SearchBudget(max_anchors=n // 2 + 2)).size
        ok &= size is not None and size <= n // 2 + 2
        out[f"even n={n}"] = size
    return ok, out


REGISTRY: dict[str, Callable[[], tuple[bool, dict]]] = {
    "fig1-and": _fig1(FIG_AND, AND2, 3),
    "fig1-or": _fig1(FIG_OR, OR2, 3),
    "fig1-xor": _fig1(FIG_XOR, XOR2, 4),
    "fig2-xor-bnn": fig2_xor_bnn,
    "fig3-and": _fig3(AND2, FIG_AND_PARITY),
    "fig3-or": _fig3(OR2, FIG_OR_PARITY),
    "eq1-parity-based": eq1_parity_based,
    "eq2-intervals": eq2_intervals,
    "eq3-parity-extension": eq3_parity_extension,
    "eq25-counterexample": eq25_counterexample,
    "eq26-infeasible": eq26_infeasible,
    "eq37-shared-interval": eq37_shared_interval,
    "thm1-nn-parity": thm1_nn_parity,
    "thm1-bnn-parity-1": _thm1_bnn(1),
    "thm1-bnn-parity-2": _thm1_bnn(2),
    "thm1-bnn-parity-3": _thm1_bnn(3),
    "thm2-bnn-majority": thm2_small_cases,
}


def run(ids=None) -> list[dict]:
    ids = list(REGISTRY) if not ids else list(ids)
    unknown = [i for i in ids if i not in REGISTRY]
    if unknown:
        raise KeyError(f"unknown example id(s): {', '.join(unknown)}")
    rows = []
    for i in ids:
        try:
            passed, details = REGISTRY[i]()
        except Exception as exc:  # a crash is a failure, reported not raised
            passed, details = False, {"error": f"{type(exc).__name__}: {exc}"}
        rows.append({"id": i, "status": "pass" if passed else "fail", "details": details})
    return rows
