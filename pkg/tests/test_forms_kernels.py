import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from thuemahler import forms, kernels
from thuemahler.errors import DomainError, InvalidDegreeError, InvalidMapError
from thuemahler.forms import BinaryForm, UnimodularMap

from conftest import random_forms

# ---------------------------------------------------------------- forms


def test_basic_values(F):
    assert F.degree == 3
    assert F(-1, -1) == 1
    assert F(5, 4) == -3
    assert forms.discriminant(F) == -108
    assert forms.height(F) == 2


def test_parse_and_json_round_trip(F):
    G = forms.parse_form('["1", "0", "0", "-2"]')
    assert G == F
    assert BinaryForm.from_json(F.to_json()) == F
    with pytest.raises(DomainError):
        forms.parse_form('{"a": 1}')
    with pytest.raises(DomainError):
        BinaryForm((0, 0, 0))
    with pytest.raises(InvalidDegreeError):
        BinaryForm((3,))


def test_unimodular_map_checks():
    with pytest.raises(InvalidMapError):
        UnimodularMap(2, 0, 0, 1)
    M = UnimodularMap(2, 1, 1, 1)
    assert M.inverse().apply(*M.apply(3, -7)) == (3, -7)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-5, 5), st.integers(-5, 5))
def test_apply_map_transports_values_and_keeps_disc(b, c, p, q):
    # (1 b; c 1+bc) has determinant 1
    M = UnimodularMap(1, b, c, 1 + b * c)
    F = BinaryForm((2, -1, 3, -5))
    G = forms.apply_map(F, M)
    assert G(p, q) == F(*M.apply(p, q))
    assert forms.discriminant(G) == forms.discriminant(F)


def test_normalize_example_xy_x_plus_y():
    F = BinaryForm((0, 1, 1, 0))  # X^2 Y + X Y^2
    G, u, v = forms.normalize_nonvanishing(F)
    assert G.coeffs[0] != 0 and G.coeffs[-1] != 0
    M = forms.normalizing_map(u, v)
    for p, q in itertools.product(range(-3, 4), repeat=2):
        assert G(p, q) == F(*M.apply(p, q))
    assert 0 <= u < 3 and 0 <= v < 3


def test_factor_over_Q():
    F = BinaryForm((1, 0, -1, 0))  # X^3 - X Y^2
    cont, fac = forms.factor_over_Q(F)
    assert cont == 1
    assert sorted(G.coeffs for G, _ in fac) == [(1, -1), (1, 0), (1, 1)]
    assert forms.form_product(fac, cont) == F
    assert len(forms.linear_factors(F)) == 3
    assert forms.is_irreducible(BinaryForm((1, 0, 0, -2)))
    assert not forms.is_irreducible(F)


def test_factor_with_y_power():
    F = BinaryForm((1, 2, 0, 0))  # X^3 + 2 X^2 Y = X^2 (X + 2Y)
    cont, fac = forms.factor_over_Q(F)
    assert forms.form_product(fac, cont) == F
    assert not forms.is_squarefree(F)


# ---------------------------------------------------------------- kernels


def brute_small(coeffs, Z, B, q_lo, q_hi, target=None):
    F = BinaryForm(tuple(coeffs))
    out = []
    for q in range(q_lo, q_hi + 1):
        for p in range(-B, B + 1):
            v = F(p, q)
            if (v == target) if target is not None else abs(v) <= Z:
                out.append((p, q, v))
    return out


def as_list(res):
    return list(zip(*(a.tolist() for a in res)))


impls = ["python"] + (["cython"] if kernels.backend() == "cython" else [])


@pytest.mark.parametrize("impl", impls)
def test_small_values_matches_brute_force(impl):
    for G in random_forms(3, 4, 11) + random_forms(4, 3, 12):
        got = as_list(kernels.small_values(G.coeffs, 60, 25, -25, 25, impl=impl))
        assert got == brute_small(G.coeffs, 60, 25, -25, 25)


@pytest.mark.parametrize("impl", impls)
def test_target_mode(impl):
    got = as_list(kernels.small_values((1, 0, 0, -2), 1, 200, -200, 200, target=1, impl=impl))
    assert got == [(-1, -1, 1), (1, 0, 1)]


@pytest.mark.parametrize("impl", impls)
def test_sbox_scan_matches_brute_force(impl):
    from math import gcd
    from thuemahler import arith

    G = BinaryForm((1, 0, 0, -2))
    S = (2, 3)
    got = as_list(kernels.sbox_scan(G.coeffs, S, 5, 30, -30, 30, coprime=False, impl=impl))
    want = []
    for q in range(-30, 31):
        for p in range(-30, 31):
            v = G(p, q)
            if v == 0 or any(p % P == 0 and q % P == 0 for P in S):
                continue
            rest = arith.strip(v, S)[0]
            if rest <= 5:
                want.append((p, q, rest))
    assert got == want
    got = as_list(kernels.sbox_scan(G.coeffs, S, 1, 30, -30, 30, coprime=True, impl=impl))
    assert got and all(gcd(p, q) == 1 and r == 1 and arith.is_smooth(G(p, q), S) for p, q, r in got)


def test_backends_agree_and_threads_do_not_matter():
    if kernels.backend() != "cython":
        pytest.skip("compiled kernels not built")
    G = BinaryForm((3, -1, 4, 1, -5))
    ref = kernels.small_values(G.coeffs, 10**5, 40000, 0, 20000, impl="python")
    for threads in (1, 4):
        got = kernels.small_values(G.coeffs, 10**5, 40000, 0, 20000, threads=threads, impl="cython")
        for a, b in zip(ref, got):
            assert np.array_equal(a, b)


def test_chunking_is_invisible():
    G = BinaryForm((1, 1, -2, 5))
    whole = as_list(kernels.small_values(G.coeffs, 500, 100, -100, 100))
    parts = []
    for lo, hi in ((-100, -37), (-36, 0), (1, 99), (100, 100)):
        parts += as_list(kernels.small_values(G.coeffs, 500, 100, lo, hi))
    assert parts == whole


def test_gpf_array_backends():
    from thuemahler import arith

    rng = np.random.default_rng(2)
    v = rng.integers(-10**15, 10**15, 400)
    v[v == 0] = 7
    want = [arith.gpf(int(x)) for x in v]
    for impl in impls:
        assert kernels.gpf_array(v, impl=impl).tolist() == want
    with pytest.raises(ValueError):
        kernels.gpf_array(np.array([0]))
