import math
import random
from fractions import Fraction

import numpy as np
import pytest

from thuemahler import approx, padic
from thuemahler.errors import DomainError, InvalidDegreeError

from conftest import random_system

X3_2 = [-2, 0, 0, 1]


def test_compositions_are_exactly_the_simplex():
    rows = approx._compositions(5, 3)
    assert len(rows) == math.comb(7, 2)
    assert (rows.sum(axis=1) == 5).all() and (rows >= 0).all()
    assert len({tuple(r) for r in rows.tolist()}) == len(rows)


@pytest.mark.parametrize("beta,beta1,t", [(3, 2.5, 0), (4, 3, 2), (6, 2.5, 3), ("7/2", "5/2", 1)])
def test_gamma_tuples(beta, beta1, t):
    s = approx.gamma_tuples(beta, beta1, t)
    assert len(s) == s.expected_size()
    assert s.size_bound_holds()
    for i in (0, len(s) - 1):
        g = s.gammas(i)
        assert sum(g) == 1 and len(g) == t + 1
    assert s.to_csv().count("\n") == len(s) + 1


def test_gamma_tuples_domain():
    with pytest.raises(DomainError):
        approx.gamma_tuples(2, 3, 1)
    with pytest.raises(DomainError):
        approx.gamma_tuples(4, 3, -1)
    assert approx.gamma_v(4, 3, 2) == 1 + math.floor(3 / Fraction(1, 3))


def test_check_inequality_exact_near_boundary():
    z = approx.RealRoot.of(X3_2)
    # |2^{1/3} - 5/4| = 0.00992..., k |p,q|^-beta with k = 1
    assert approx.check_inequality(1, 3, [approx.INF], [z], 5, 4) is False
    assert approx.check_inequality(1, Fraction(5, 2), [approx.INF], [z], 5, 4) is True


def test_check_system_mixed_places():
    z = approx.RealRoot.of(X3_2)
    w = padic.padic_roots(X3_2, 5, 30)[0]
    sys = approx.ApproxSystem(2, Fraction(5, 2), [approx.INF, 5], [z, w],
                              [Fraction(1, 2), Fraction(1, 2)])
    rep = sys_rep = approx.check_system(sys, 5, 4)
    assert rep.height_ok
    assert rep.places[0].holds and not rep.places[1].holds
    assert not sys_rep.holds
    assert "places" in rep.to_json()
    with pytest.raises(DomainError):
        approx.check_system(sys, 4, 2)


def test_system_validation():
    z = approx.RealRoot.of(X3_2)
    with pytest.raises(DomainError):
        approx.ApproxSystem(2, 3, [approx.INF], [z], [Fraction(1, 2)])
    with pytest.raises(DomainError):
        approx.ApproxSystem(Fraction(1, 2), 3, [approx.INF], [z], [1])
    w = padic.padic_roots(X3_2, 5, 10)[0]
    with pytest.raises(DomainError):
        approx.ApproxSystem(2, 3, [7], [w], [1])


def test_gap_threshold_values():
    assert approx.gap_threshold(1, 3, 10) == 50
    assert approx.gap_threshold(Fraction(1, 2) + Fraction(1, 2), 3, 10) == 50
    assert approx.gap_threshold(2, Fraction(5, 2), 16) == Fraction(64, 4)
    lo, hi = approx.gap_threshold(2, Fraction(5, 2), 10)
    # value is 10^{3/2}/4: compare squares exactly
    assert (4 * lo) ** 2 <= 1000 <= (4 * hi) ** 2 and hi - lo < Fraction(1, 10**30)
    assert approx.gap_holds(1, 3, 10, 50) and not approx.gap_holds(1, 3, 10, 49)
    with pytest.raises(DomainError):
        approx.gap_threshold(8, 3, 2)


def test_iroot_floor():
    rng = random.Random(1)
    for _ in range(300):
        x = rng.randrange(1, 10**rng.randint(1, 80))
        d = rng.randint(2, 7)
        r = approx._iroot_floor(x, d)
        assert r**d <= x < (r + 1) ** d


def test_enumeration_against_brute_force():
    rng = random.Random(17)
    for _ in range(5):
        sys = random_system(rng)
        H = 60
        got = approx.enumerate_solutions(sys, H)
        want = []
        for q in range(1, H + 1):
            for p in range(-H, H + 1):
                if math.gcd(p, q) == 1 and approx.check_system(sys, p, q).holds:
                    want.append((p, q))
        want.sort(key=lambda s: (max(abs(s[0]), s[1]), s[0], s[1]))
        assert got == want


def test_count_bound_and_classifier(F):
    assert approx.system_count_bound(3, 3) > 0
    assert approx.system_height_floor(1, 4, 2) == 2.0 * 4
    with pytest.raises(DomainError):
        approx.system_count_bound(3, 2)
    with pytest.raises(InvalidDegreeError):
        approx.system_count_bound(2, 3)
    assert approx.classify_solution(F, (), 10, 100, 1) == "large"
    assert approx.classify_solution(F, (), 10, 5, 1) == "medium"
    assert approx.classify_solution(F, (), 10, 1, 1) == "small"
