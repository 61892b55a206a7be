import math

import pytest

from thuemahler import bounds
from thuemahler.errors import DomainError


def test_integer_bounds_are_exact():
    assert bounds.eval_bound("evertse84", t=2).value == 5_764_801
    assert bounds.eval_bound("evertse84", t=0).value == 7**4
    assert bounds.eval_bound("evertse97", n=3, t=1).value == 2 * (3 * 10**5) ** 2
    assert bounds.eval_bound("mahler84", n=3, m=12).value == 64 * 3**3
    assert bounds.eval_bound("stewart91", n=4, omega_g=0).value == 4200 * 4
    assert bounds.eval_bound("beukers_schlickewei", r=0).value == 2**16


def test_lower_bound_example():
    b = bounds.eval_bound("est_lower", t=100, eps=1)
    assert b.side == bounds.LOWER
    assert math.isclose(b.value, math.exp(3 * math.sqrt(100 / math.log(100))))
    assert 1.1e6 < b.value < 1.3e6


def test_huge_values_switch_to_log_form():
    b = bounds.eval_bound("evertse97", n=3, t=200)
    assert b.log_form and b.value is None
    assert math.isclose(b.log_value, math.log(2) + 201 * math.log(3e5), rel_tol=1e-14)


def test_bugeaud_gyory_constant():
    b = bounds.eval_bound("bugeaud_gyory", n=3, H=3, M=6)
    assert math.isclose(b.extras["log_c"], 108 * math.log(3), rel_tol=1e-15)
    assert bounds.bugeaud_gyory_c(3) == 3**36 * 3**72
    assert b.side == bounds.HEIGHT
    assert not bounds.height_bound_covers(b, 10**6)


@pytest.mark.parametrize("name,params", [
    ("bugeaud_gyory", {"n": 3, "H": 3, "M": 1}),
    ("evertse84", {"t": -1}),
    ("mahler84", {"n": 2, "omega_m": 1}),
    ("mahler84", {"n": 3, "m": 0}),
    ("bombieri_schmidt", {"n": 3, "omega_m": 1}),
    ("est_lower", {"t": 5, "eps": 4}),
    ("nope", {}),
])
def test_domain_errors(name, params):
    with pytest.raises(DomainError):
        bounds.eval_bound(name, **params)


def test_monotone_in_parameters():
    for name, key, fixed in (("evertse97", "t", {"n": 3}), ("evertse97", "n", {"t": 2}),
                             ("evertse84", "t", {}), ("mahler84", "omega_m", {"n": 5}),
                             ("beukers_schlickewei", "r", {}),
                             ("bugeaud_gyory", "H", {"n": 3, "M": 10}),
                             ("bugeaud_gyory", "M", {"n": 4, "H": 5})):
        logs = [bounds.eval_bound(name, **{key: v, **fixed}).log_value for v in range(3, 12)]
        assert logs == sorted(logs), name


def test_verify_counts():
    up = bounds.eval_bound("evertse84", t=1)
    assert bounds.verify_counts(3, up).status == "PASS"
    assert bounds.verify_counts(7**6 + 1, up).status == "FAIL"
    low = bounds.eval_bound("est_lower", t=4, eps=1)
    for obs in (0, 1, 10**6):
        assert bounds.verify_counts(obs, low).status == "INFO"
    with pytest.raises(DomainError):
        bounds.verify_counts(3, bounds.eval_bound("bugeaud_gyory", n=3, H=3, M=6))
    hb = bounds.eval_bound("bugeaud_gyory", n=3, H=3, M=6)
    assert bounds.verify_counts(1000, hb, kind="height").status == "PASS"


def test_json_form():
    d = bounds.eval_bound("evertse97", n=3, t=4).to_json()
    assert d["name"] == "evertse97" and isinstance(d["log_value"], float)
