import random
from fractions import Fraction as F

import numpy as np
import pytest

from nnrep import fme
from nnrep.boolfn import LinearThresholdFn, SymmetricProfile, TruthTable, all_profiles, comp_function, truth_table
from nnrep.construct import parity_extension_system
from nnrep.lp import separate

import oracles


def ineq(coeffs, bound, strict=True):
    return fme.Inequality(tuple(coeffs), bound, strict)


def test_fme_feasible_point():
    # 0 < x < 1, x < y < 2
    system = [ineq((-1, 0), 0), ineq((1, 0), 1), ineq((1, -1), 0), ineq((0, 1), 2)]
    res = fme.solve(system)
    assert res.feasible and all(s.holds(res.point) for s in system)


def test_fme_strict_vs_weak():
    # x <= 0 and -x <= 0 is feasible; make one strict and it is not
    assert fme.solve([ineq((1,), 0, False), ineq((-1,), 0, False)]).feasible
    res = fme.solve([ineq((1,), 0, True), ineq((-1,), 0, False)])
    assert not res.feasible and res.certificate.is_valid()


def test_fme_unbounded_and_empty():
    assert fme.solve([ineq((1, 1), 5)]).feasible
    assert fme.solve([], 2).point == (0, 0)
    res = fme.solve([ineq((0, 0), -1, False)])
    assert not res.feasible


def test_fme_random_systems_agree_with_certificates():
    rng = random.Random(2)
    for _ in range(200):
        k = rng.randint(1, 3)
        system = [ineq([rng.randint(-3, 3) for _ in range(k)], rng.randint(-4, 4), rng.random() < 0.7)
                  for _ in range(rng.randint(1, 6))]
        res = fme.solve(system, k)
        if res.feasible:
            assert all(s.holds(res.point) for s in system)
        else:
            assert res.certificate.is_valid()


def test_certificate_for_counterexample_system():
    p = SymmetricProfile(8, (1, 0, 1, 1, 1, 1, 1, 0, 1))
    system = parity_extension_system(p)
    assert len(system) == 4 + 8
    res = fme.solve(system, 5)
    assert not res.feasible
    cert = res.certificate
    assert cert.is_valid()
    assert cert.lines()[-1] == "sum: 0 < 0"
    names = [f"a{i}" for i in range(1, 6)]
    assert all("x1" not in line for line in cert.lines(names))
    assert cert.to_json(names)["combined"] == "0 < 0"


def test_inequality_render():
    assert ineq((1, -2), F(1, 2)).render() == "x1 - 2*x2 < 1/2"
    assert ineq((-1, 0), 0, False).render(["a", "b"]) == "-a <= 0"


def _check_separation(table, n):
    sep = separate(table, n)
    if sep.separable:
        t = LinearThresholdFn(sep.weights, sep.threshold)
        assert np.array_equal(truth_table(t), table)
    else:
        assert sep.overlap
    return sep


def test_separate_small_cases():
    assert not separate(np.array([0, 1, 1, 0]), 2).separable
    sep = separate(np.array([0, 0, 0, 1]), 2)
    assert sep.weights == (1, 1) and sep.threshold == 2
    assert separate(np.zeros(8, dtype=int), 3).separable
    assert separate(np.ones(8, dtype=int), 3).separable


@pytest.mark.parametrize("n", [1, 2, 3])
def test_separate_matches_bruteforce_all_functions(n):
    for code in range(1 << (1 << n)):
        bits = "".join(str((code >> i) & 1) for i in range(1 << n))
        f = TruthTable(n, bits)
        sep = _check_separation(truth_table(f), n)
        assert sep.separable == (oracles.separable_brute(f, n) is not None)


def test_separate_symmetric_and_threshold():
    for n in range(1, 8):
        for p in all_profiles(n):
            runs = len(oracles.run_lengths(p.values))
            assert _check_separation(truth_table(p), n).separable == (runs <= 2)
    rng = random.Random(9)
    for _ in range(30):
        n = rng.randint(1, 9)
        t = LinearThresholdFn(tuple(rng.randint(-8, 8) for _ in range(n)), rng.randint(-10, 10))
        assert _check_separation(truth_table(t), n).separable
    assert _check_separation(truth_table(comp_function(4)), 8).separable
