import math
import time
from fractions import Fraction

import pytest

from thuemahler import arith, forms, solve
from thuemahler.errors import DomainError, InvalidDegreeError, UnsupportedInstanceError
from thuemahler.forms import BinaryForm

from conftest import random_forms


def brute_thue(F, m, B):
    return sorted(((p, q) for p in range(-B, B + 1) for q in range(-B, B + 1) if F(p, q) == m),
                  key=solve.height_key)


def test_thue_x3_minus_2y3(F):
    t = time.perf_counter()
    r = solve.solve_thue(F, 1, 1000)
    assert time.perf_counter() - t < 1.0
    assert sorted(r.solutions) == [(-1, -1), (1, 0)]
    assert r.flag == "box-limited"
    assert sorted(solve.solve_thue(F, -1, 1000).solutions) == [(-1, 0), (1, 1)]
    assert solve.solve_thue(F, 1, 1000, certified_bound=10).complete


def test_thue_matches_brute_force():
    for G in random_forms(3, 3, 5) + random_forms(4, 2, 6):
        for m in (1, -2, 7):
            assert solve.solve_thue(G, m, 200).solutions == brute_thue(G, m, 200)


def test_thue_zero_locus():
    G = BinaryForm((1, 0, -1, 0))  # X (X - Y) (X + Y)
    z = solve.solve_thue(G, 0, 3).solutions
    assert len(z) == 1 + 3 * 6
    assert all(G(p, q) == 0 for p, q in z)


def test_thue_rejects():
    with pytest.raises(InvalidDegreeError):
        solve.solve_thue(BinaryForm((1, 0, 1)), 1, 10)
    with pytest.raises(UnsupportedInstanceError):
        solve.solve_thue(BinaryForm((1, 2, 1, 0)), 1, 10)
    with pytest.raises(DomainError):
        solve.solve_thue(BinaryForm((1, 0, 0, -2)), 1, 0)


def brute_tm(F, S, B):
    out = []
    for p in range(-B, B + 1):
        for q in range(-B, B + 1):
            if math.gcd(p, q) == 1:
                v = F(p, q)
                if v and arith.is_smooth(v, S):
                    out.append((p, q))
    return sorted(out)


def test_thue_mahler_examples(F):
    r = solve.solve_thue_mahler(F, (2, 3), 100)
    pqs = {(p, q) for p, q, _ in r.solutions}
    assert (5, 4) in pqs and (-5, -4) in pqs  # F(5, 4) = -3
    assert (1, 1) in pqs and (2, 3) not in pqs  # F(2, 3) = -46
    assert len(r) == 12 and r.extra["up_to_sign"] == 6
    for p, q, e in r.solutions:
        assert abs(F(p, q)) == 2 ** e[0] * 3 ** e[1]
    assert sorted((p, q) for p, q, _ in r.solutions) == brute_tm(F, (2, 3), 100)


def test_thue_mahler_empty_S_is_unit_values(F):
    r = solve.solve_thue_mahler(F, (), 300)
    assert sorted((p, q) for p, q, _ in r.solutions) == sorted(
        solve.solve_thue(F, 1, 300).solutions + solve.solve_thue(F, -1, 300).solutions)


def test_thue_mahler_after_normalizing():
    F = BinaryForm((0, 1, 1, 0))  # XY(X + Y)
    G, u, v = forms.normalize_nonvanishing(F)
    M = forms.normalizing_map(u, v)
    S = (2, 3, 5)
    gs = {(p, q) for p, q, _ in solve.solve_thue_mahler(G, S, 60).solutions}
    fs = {(p, q) for p, q, _ in solve.solve_thue_mahler(F, S, 400).solutions}
    assert {M.apply(p, q) for p, q in gs} <= fs
    Minv = M.inverse()
    back = {Minv.apply(p, q) for p, q in fs}
    assert {pq for pq in back if max(map(abs, pq)) <= 60} == gs


def test_sunit_small_sets():
    assert len(solve.solve_sunit((2,), 5)) == 3
    for S, E in (((2,), 2), ((2,), 8), ((2, 3), 4), ((2, 3, 5), 3)):
        assert solve.solve_sunit(S, E) == solve.solve_sunit_bruteforce(S, E)
    xs = {(s.x, s.y) for s in solve.solve_sunit((2,), 3)}
    assert xs == {(Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(2)),
                  (Fraction(1, 2), Fraction(1, 2))}


def test_sunit_symmetry_closure():
    sols = solve.solve_sunit((2, 3, 5), 6)
    E = 6
    pairs = {(s.x, s.y) for s in sols}
    for x, y in pairs:
        assert x + y == 1
        assert (y, x) in pairs
        img = (1 / x, -y / x)
        exps = [solve.s_exponents(t, (2, 3, 5)) for t in img]
        if all(abs(z) <= E for e in exps for z in e):
            assert img in pairs


def test_weighted_sunit():
    sols = solve.solve_weighted_sunit(3, -2, (2, 3), 3)
    assert sols
    for s in sols:
        assert 3 * s.x - 2 * s.y == 1
    assert solve.solve_weighted_sunit(1, 1, (2,), 3) == solve.solve_sunit((2,), 3)
    with pytest.raises(DomainError):
        solve.solve_weighted_sunit(0, 1, (2,), 3)


@pytest.mark.parametrize("A,want", [(64, (2, 2)), (-96, (-3, 2)), (7, (7, 1)), (3**11, (3, 9))])
def test_fifth_power_decompose(A, want):
    a, p = solve.fifth_power_decompose(A)
    assert (a, p) == want and a * p**5 == A
