import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thuemahler import arith, polys
from thuemahler.errors import DomainError

sympy = pytest.importorskip("sympy")


@given(st.integers(min_value=-10**18, max_value=10**18).filter(lambda m: m != 0))
def test_factorize_matches_sympy(m):
    fac = arith.factorize(m)
    assert fac.value() == m
    assert dict(fac.factors) == sympy.factorint(abs(m))


def test_factorize_large_semiprime():
    p, q = 1000000007, 998244353
    assert arith.factorize(p * q * 12).factors == ((2, 2), (3, 1), (q, 1), (p, 1))


def test_is_prime_against_sympy():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randrange(1, 10**15)
        assert arith.is_prime(n) == sympy.isprime(n)
    assert arith.is_prime(2**61 - 1)
    assert not arith.is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_gpf_and_omega():
    assert arith.gpf(1) == arith.gpf(-1) == 1
    assert arith.gpf(-96) == 3
    assert arith.omega(30) == 3
    assert arith.omega(1) == 0


def test_primeset_validation():
    assert arith.PrimeSet.of([5, 2, 2]).primes == (2, 5)
    with pytest.raises(DomainError):
        arith.PrimeSet((2, 4))
    with pytest.raises(DomainError):
        arith.PrimeSet((3, 2))


def test_strip_and_smooth():
    assert arith.strip(-360, [2, 3]) == (5, [3, 2])
    assert arith.is_smooth(6, [2, 3])
    assert not arith.is_smooth(25, [2, 3])
    with pytest.raises(DomainError):
        arith.strip(0, [2])


def test_kfree_table_matches_definition():
    T = arith.kfree_table(3000, 2)
    for i in range(1, 3001):
        assert T[i] == arith.is_kfree(i, 2)
    assert not T[0]
    T3 = arith.kfree_table(1000, 3)
    assert T3[4] and not T3[8] and not T3[27]


def test_primes_up_to():
    assert list(arith.primes_up_to(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(arith.primes_up_to(10**5)) == 9592


# ---------------------------------------------------------------- polynomials


def _sym(f):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(f)), x)


@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7).filter(lambda f: f[-1] != 0))
def test_discriminant_matches_sympy(f):
    if polys.deg(f) < 1:
        return
    assert polys.discriminant(f) == int(sympy.discriminant(_sym(f)))


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=6).filter(lambda f: f[-1] != 0),
       st.lists(st.integers(-9, 9), min_size=2, max_size=5).filter(lambda f: f[-1] != 0))
def test_factor_z_products(f, g):
    h = polys.mul(f, g)
    cont, fac = polys.factor_z(h)
    prod = [cont]
    for u, e in fac:
        prod = polys.mul(prod, polys.power(u, e))
    assert polys.trim(prod) == polys.trim(h)
    ours = sorted((tuple(u), e) for u, e in fac)
    _, theirs = sympy.factor_list(_sym(h))
    assert len(ours) == len(theirs)
    for u, _ in fac:
        assert _sym(u).is_irreducible


def test_real_root_isolation_counts():
    rng = random.Random(5)
    for _ in range(40):
        f = [rng.randint(-12, 12) for _ in range(rng.randint(3, 8))]
        f[-1] = f[-1] or 1
        intervals, core = polys.isolate_real_roots(f)
        assert len(intervals) == len(sympy.real_roots(_sym(polys.squarefree_part(f))))
        for lo, hi in intervals:
            if lo != hi:
                lo2, hi2 = polys.refine_root(core, lo, hi, Fraction(1, 10**12))
                assert hi2 - lo2 <= Fraction(1, 10**12)
                assert polys.evaluate(core, lo2) * polys.evaluate(core, hi2) <= 0


def test_factor_mod_p():
    # x^3 - 2 mod 5 has the single root 3
    fs = polys.factor_mod_p([-2, 0, 0, 1], 5)
    degs = sorted(polys.deg(g) for g in fs)
    assert degs == [1, 2]


def test_numpy_ints_are_accepted():
    assert polys.evaluate([np.int64(1), 2], 3) == 7
