"""Box-limited solvers for Thue, Thue-Mahler and S-unit equations.

Results are complete inside the stated box (or exponent box). A result is
marked certified only when the caller passes an a priori height bound that
the box covers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith, kernels, polys
from .errors import DomainError, InvalidDegreeError, UnsupportedInstanceError
from .forms import BinaryForm, coerce, discriminant, linear_factors


def height_key(pq):
    return (max(abs(pq[0]), abs(pq[1])), pq[0], pq[1])


@dataclass
class SolveResult:
    solutions: list
    box: int
    complete: bool = False  # certified: a proven height bound is <= box
    extra: dict = field(default_factory=dict)

    @property
    def flag(self) -> str:
        return "complete" if self.complete else "box-limited"

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def _certified(bound, B) -> bool:
    return bound is not None and bound <= B


def _check_form(F: BinaryForm, B: int):
    if F.degree < 3:
        raise InvalidDegreeError("solver needs degree >= 3")
    if discriminant(F) == 0:
        raise UnsupportedInstanceError("form has a repeated factor")
    if B < 1:
        raise DomainError("B must be >= 1")


# ---------------------------------------------------------------- Thue


def zero_locus(F, B: int) -> list:
    """(p, q) in the box with F(p, q) = 0: (0, 0) plus points on rational lines."""
    F = coerce(F)
    pts = {(0, 0)}
    for L in linear_factors(F):
        a, b = L.coeffs  # a X + b Y
        g = math.gcd(a, b)
        dp, dq = -b // g, a // g
        t = 1
        while max(abs(t * dp), abs(t * dq)) <= B:
            pts.add((t * dp, t * dq))
            pts.add((-t * dp, -t * dq))
            t += 1
    return sorted(pts, key=height_key)


def _integer_roots_in(f, B):
    """Integer roots of f in [-B, B] (exact; f low-first, non-zero)."""
    f = polys.trim(f)
    if polys.deg(f) < 1:
        return [] if any(f) else list(range(-B, B + 1))
    out = []
    intervals, core = polys.isolate_real_roots(f)
    for lo, hi in intervals:
        if hi < -B or lo > B:
            continue
        if lo != hi:
            lo, hi = polys.refine_root(core, lo, hi, Fraction(1, 4))
        for x in range(math.floor(lo), math.ceil(hi) + 1):
            if -B <= x <= B and polys.evaluate(f, x) == 0 and x not in out:
                out.append(x)
    return out


def _thue_exact(F: BinaryForm, m: int, B: int):
    # slow path for values beyond 64-bit: solve F(X, q) = m per q
    sols = []
    n = F.degree
    for q in range(-B, B + 1):
        f = [F.coeffs[n - i] * q ** (n - i) for i in range(n + 1)]  # F(X, q), low-first
        f[0] -= m
        sols += [(p, q) for p in _integer_roots_in(f, B)]
    return sols


def solve_thue(F, m: int, B: int, threads: int = 1, certified_bound=None) -> SolveResult:
    """All (p, q) with max(|p|, |q|) <= B and F(p, q) = m."""
    F = coerce(F)
    _check_form(F, B)
    m = int(m)
    if m == 0:
        return SolveResult(zero_locus(F, B), B, False, {"zero_locus": True})
    try:
        p, q, _ = kernels.small_values(F.coeffs, abs(m), B, -B, B, target=m, threads=threads)
        sols = list(zip(p.tolist(), q.tolist()))
    except ValueError:
        sols = _thue_exact(F, m, B)
    sols.sort(key=height_key)
    return SolveResult(sols, B, _certified(certified_bound, B))


# ---------------------------------------------------------------- Thue-Mahler


def solve_thue_mahler(F, S, B: int, threads: int = 1, certified_bound=None) -> SolveResult:
    """Coprime (p, q) in the box with |F(p, q)| S-smooth and non-zero.

    Solutions are (p, q, exponents) with exponents in the order of S.
    Both (p, q) and (-p, -q) are listed.
    """
    F = coerce(F)
    _check_form(F, B)
    primes = arith.PrimeSet.of(S).primes if not isinstance(S, arith.PrimeSet) else S.primes
    p, q, v = kernels.sbox_scan(F.coeffs, primes, 1, B, -B, B, coprime=True, threads=threads)
    sols = []
    for a, b in zip(p.tolist(), q.tolist()):
        rest, exps = arith.strip(F(a, b), primes)
        assert rest == 1
        sols.append((a, b, tuple(exps)))
    sols.sort(key=height_key)
    up_to_sign = sum(1 for a, b, _ in sols if b > 0 or (b == 0 and a > 0))
    return SolveResult(sols, B, _certified(certified_bound, B),
                       {"S": list(primes), "up_to_sign": up_to_sign})


# ---------------------------------------------------------------- S-units


@dataclass(frozen=True, order=True)
class SUnitSolution:
    x: Fraction
    y: Fraction
    zx: tuple = ()
    zy: tuple = ()

    @property
    def signs(self):
        return (1 if self.x > 0 else -1, 1 if self.y > 0 else -1)

    def to_json(self):
        return {"x": str(self.x), "y": str(self.y), "zx": list(self.zx), "zy": list(self.zy),
                "signs": list(self.signs)}


def s_exponents(x: Fraction, primes) -> tuple | None:
    """Exponent vector of the S-unit x, or None if x is not an S-unit."""
    if x == 0:
        return None
    num, ex_n = arith.strip(x.numerator, primes)
    den, ex_d = arith.strip(x.denominator, primes)
    if num != 1 or den != 1:
        return None
    return tuple(a - b for a, b in zip(ex_n, ex_d))


def _smooth_up_to_exp(primes, E) -> list:
    out = [1]
    for P in primes:
        out = [a * P**e for a in out for e in range(E + 1)]
    return sorted(out)


def _make(x: Fraction, y: Fraction, primes):
    return SUnitSolution(x, y, s_exponents(x, primes), s_exponents(y, primes))


def _within(sol: SUnitSolution, E: int) -> bool:
    return all(abs(z) <= E for z in sol.zx + sol.zy)


def solve_sunit(S, E: int) -> list:
    """x + y = 1 in S-units with every exponent of x and y bounded by E.

    Writing x = A/C, y = B/C with A + B = C pairwise coprime, each prime of S
    divides at most one of A, B, C. For every assignment of the primes to
    A, B, C (or none), A and C run over smooth numbers and C - A is looked up
    among the B-smooth numbers. Every triple with 0 < A <= B < C gives up to
    six solutions by the symmetries x <-> y and x -> 1/x, y -> -y/x.
    """
    if E < 0:
        raise DomainError("E must be >= 0")
    primes = arith.PrimeSet.of(S).primes if not isinstance(S, arith.PrimeSet) else S.primes
    triples = set()
    for assign in itertools.product(range(4), repeat=len(primes)):
        pa = [P for P, r in zip(primes, assign) if r == 0]
        pb = [P for P, r in zip(primes, assign) if r == 1]
        pc = [P for P, r in zip(primes, assign) if r == 2]
        if not pc:
            continue  # C >= 2 since C = A + B
        As = _smooth_up_to_exp(pa, E)
        Bs = set(_smooth_up_to_exp(pb, E))
        Cs = _smooth_up_to_exp(pc, E)
        for a in As:
            for c in Cs:
                if c <= a:
                    continue
                b = c - a
                if b >= a and b in Bs and math.gcd(a, b) == 1:
                    triples.add((a, b, c))
    sols = set()
    for a, b, c in triples:
        for x, y in ((Fraction(a, c), Fraction(b, c)), (Fraction(c, a), Fraction(-b, a)),
                     (Fraction(c, b), Fraction(-a, b))):
            for u, w in ((x, y), (y, x)):
                s = _make(u, w, primes)
                if _within(s, E):
                    sols.add(s)
    return sorted(sols)


def sunit_units(primes, E: int):
    """All S-units with exponents in [-E, E], both signs."""
    out = []
    for zs in itertools.product(range(-E, E + 1), repeat=len(primes)):
        v = Fraction(1)
        for P, z in zip(primes, zs):
            v *= Fraction(P) ** z
        out += [v, -v]
    return out


def solve_sunit_bruteforce(S, E: int) -> list:
    """Oracle: try every S-unit x and test 1 - x."""
    primes = arith.PrimeSet.of(S).primes
    sols = []
    for x in sunit_units(primes, E):
        y = 1 - x
        zy = s_exponents(y, primes) if y else None
        if zy is not None and all(abs(z) <= E for z in zy):
            sols.append(_make(x, y, primes))
    return sorted(sols)


MAX_UNITS = 2_000_000


def solve_weighted_sunit(a, b, S, E: int) -> list:
    """a x + b y = 1 in S-units with exponents bounded by E (a, b non-zero rationals)."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise DomainError("weights a, b must be non-zero")
    if E < 0:
        raise DomainError("E must be >= 0")
    primes = arith.PrimeSet.of(S).primes if not isinstance(S, arith.PrimeSet) else S.primes
    if a == 1 and b == 1:
        return solve_sunit(primes, E)
    if 2 * (2 * E + 1) ** len(primes) > MAX_UNITS:
        raise UnsupportedInstanceError("exponent box too large for the weighted search")
    sols = []
    for x in sunit_units(primes, E):
        y = (1 - a * x) / b
        if y == 0:
            continue
        zy = s_exponents(y, primes)
        if zy is not None and all(abs(z) <= E for z in zy):
            sols.append(_make(x, y, primes))
    return sorted(sols)


def fifth_power_decompose(A: int):
    """(a, p) with A = a p^5, p >= 1 and a fifth-power-free."""
    A = int(A)
    if A == 0:
        raise DomainError("A must be non-zero")
    fac = arith.factorize(A)
    a, p = fac.sign, 1
    for P, e in fac.factors:
        a *= P ** (e % 5)
        p *= P ** (e // 5)
    return a, p
