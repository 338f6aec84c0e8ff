import random
from fractions import Fraction as F

import pytest

from nnrep.boolfn import (
    LinearThresholdFn,
    SymmetricProfile,
    all_profiles,
    comp_function,
    constant,
    intervals,
    parity,
    symmetric_threshold,
)
from nnrep.construct import (
    ConstantFunctionError,
    ConstructionError,
    ConstructionParams,
    interval_construction,
    interval_rhs,
    lt_two_anchor,
    parity_based,
    parity_extension,
    parity_extension_solve,
    symmetric_lt_anchor,
)
from nnrep.exactnum import ones_plus_eps, res_of_matrix
from nnrep.nnrepr import AnchorMatrix, check_ns_condition, is_interval_assignment, verify_representation

H = F(1, 2)
SIX = SymmetricProfile(5, (0, 0, 1, 1, 1, 0))
NO_EXT = SymmetricProfile(8, (1, 0, 1, 1, 1, 1, 1, 0, 1))


def _valid(A, f):
    return verify_representation(A, f).valid


def test_parity_based_examples():
    A = parity_based(SIX)
    assert A.rows == tuple((F(k, 5),) * 5 for k in range(6))
    assert A.labels == SIX.values
    and_a = parity_based(SymmetricProfile(2, (0, 0, 1)))
    assert and_a == AnchorMatrix.from_rows([[0, 0], [H, H], [1, 1]], [0, 0, 1])
    p3 = parity_based(parity(3))
    assert p3.size == 4 and p3.labels == (0, 1, 0, 1) and _valid(p3, parity(3))


@pytest.mark.parametrize("n", range(1, 7))
def test_parity_based_always_valid(n):
    for p in all_profiles(n):
        assert _valid(parity_based(p), p)


def test_parity_extension_examples():
    A = parity_extension(SIX)
    assert A is not None and A.size == 3 and _valid(A, SIX)
    assert all(len(set(a.coords)) == 1 for a in A.anchors)
    assert parity_extension(NO_EXT) is None
    res = parity_extension_solve(NO_EXT)
    assert not res.feasible and res.certificate.is_valid()
    const = parity_extension(constant(4, 1))
    assert const.size == 1 and _valid(const, constant(4, 1))


@pytest.mark.parametrize("n", range(1, 9))
def test_parity_extension_witnesses_verify(n):
    for p in all_profiles(n):
        A = parity_extension(p)
        if A is None:
            assert parity_extension_solve(p).certificate.is_valid()
        else:
            assert A.size == len(intervals(p))
            assert _valid(A, p)


def test_interval_construction_examples():
    xor = SymmetricProfile(2, (0, 1, 0))
    A = interval_construction(xor)
    rep = verify_representation(A, xor)
    assert A.size == 3 and rep.valid and is_interval_assignment(rep, intervals(xor))
    t = symmetric_threshold(5, 3)
    assert interval_construction(t).size == 2 and _valid(interval_construction(t), t)
    const = interval_construction(constant(3, 0))
    assert const.rows == ((H, H, H),) and const.labels == (0,)


def test_interval_construction_differences_and_rhs():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(1, 9)
        p = SymmetricProfile(n, tuple(rng.randint(0, 1) for _ in range(n + 1)))
        iv = intervals(p)
        if len(iv) < 2:
            continue
        A = interval_construction(p)
        b = ones_plus_eps(len(iv) - 1, n, H)
        for i in range(A.size - 1):
            assert tuple(y - x for x, y in zip(A.rows[i], A.rows[i + 1])) == b.row(i)
        c = interval_rhs(b.entries, iv.ends[:-1], [H] * (len(iv) - 1))
        assert b @ A.rows[0] == c
        assert check_ns_condition(A, iv)


def test_interval_construction_matches_printed_eq():
    printed = [
        ["17.78", "2.28", "-5.72", "-21.22", "-1.53", "-1.53", "-1.53", "-1.53"],
        ["19.28", "3.28", "-4.72", "-20.22", "-0.53", "-0.53", "-0.53", "-0.53"],
        ["20.28", "4.78", "-3.72", "-19.22", "0.47", "0.47", "0.47", "0.47"],
        ["21.28", "5.78", "-2.22", "-18.22", "1.47", "1.47", "1.47", "1.47"],
        ["22.28", "6.78", "-1.22", "-16.72", "2.47", "2.47", "2.47", "2.47"],
    ]
    A = interval_construction(NO_EXT)
    assert A.labels == (1, 0, 1, 0, 1)
    for row, ref in zip(A.rows, printed):
        for x, y in zip(row, ref):
            assert abs(x - F(y)) <= F(1, 100)
    assert _valid(A, NO_EXT)


def test_oversized_eps_is_reported():
    with pytest.raises(ConstructionError) as info:
        interval_construction(SIX, ConstructionParams(eps=8))
    assert info.value.rows


def test_params_validation_and_json():
    with pytest.raises(ValueError):
        ConstructionParams(eps=0)
    with pytest.raises(ValueError):
        ConstructionParams(lambdas=(F(1, 2), 1))
    p = ConstructionParams(eps=F(1, 4), lambdas=(F(1, 3),))
    assert ConstructionParams.from_json(p.to_json()) == p
    assert ConstructionParams.from_json({}) == ConstructionParams()
    with pytest.raises(ValueError):
        ConstructionParams(lambdas=(H,)).lambdas_for(2)


def test_custom_lambdas_still_valid():
    p = SymmetricProfile(6, (0, 1, 1, 0, 0, 0, 1))
    lams = (F(1, 4), F(3, 4), F(1, 10))
    assert _valid(interval_construction(p, ConstructionParams(lambdas=lams)), p)


def test_lt_two_anchor_examples():
    A = lt_two_anchor(LinearThresholdFn((1,), 1))
    assert A.rows == ((F(-1, 2),), (F(3, 2),)) and A.labels == (0, 1)
    assert _valid(lt_two_anchor(comp_function(2)), comp_function(2))
    and2 = LinearThresholdFn((1, 1), 2)
    assert _valid(lt_two_anchor(and2), and2)
    with pytest.raises(ConstantFunctionError):
        lt_two_anchor(LinearThresholdFn((1, 1), 3))
    with pytest.raises(ConstantFunctionError):
        lt_two_anchor(LinearThresholdFn((0, 0), 0))


def _random_lt(rng, n, wmax=8):
    while True:
        t = LinearThresholdFn(tuple(rng.randint(-wmax, wmax) for _ in range(n)), rng.randint(-wmax * n // 2, wmax * n // 2))
        if not t.is_constant():
            return t


@pytest.mark.parametrize("scale", [None, 1, F(1, 3)])
def test_lt_two_anchor_geometry(scale):
    rng = random.Random(17)
    for _ in range(60):
        t = _random_lt(rng, rng.randint(1, 7))
        A = lt_two_anchor(t, scale=scale)
        a1, a2 = A.rows
        diff = [y - x for x, y in zip(a1, a2)]
        c = diff[next(i for i, w in enumerate(t.weights) if w)] / (2 * t.weights[next(i for i, w in enumerate(t.weights) if w)])
        if scale is not None:
            assert c == scale
        assert c > 0
        assert diff == [2 * c * w for w in t.weights]
        mid = [(x + y) / 2 for x, y in zip(a1, a2)]
        assert sum(w * m for w, m in zip(t.weights, mid)) == t.threshold - H
        assert _valid(A, t)


def test_symmetric_lt_anchor_examples():
    A = symmetric_lt_anchor(5, 3)
    assert A.rows == ((0, 0, F(-1, 2), -1, -1), (2, 2, F(3, 2), 1, 1))
    assert symmetric_lt_anchor(1, 1).rows == ((F(-1, 2),), (F(3, 2),))
    assert _valid(symmetric_lt_anchor(2, 2), symmetric_threshold(2, 2))
    with pytest.raises(ValueError):
        symmetric_lt_anchor(3, 4)


@pytest.mark.parametrize("n", range(1, 11))
def test_symmetric_lt_anchor_all_thresholds(n):
    for b in range(1, n + 1):
        A = symmetric_lt_anchor(n, b)
        assert _valid(A, symmetric_threshold(n, b))
        assert res_of_matrix(A.rows) == 2
