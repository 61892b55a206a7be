"""Approximation systems: exponent tuples, per-place checks, and the gap bound.

A system is given by k >= 1, beta1 > 0 and, for every place P of S, a root
zeta_P and a weight Gamma_P (the weights sum to 1). A rational p/q (gcd 1,
q > 0) solves it when, with h = max(|p|, |q|),

    min(1, |zeta_P - p/q|_P) <= (k h^-beta1)^Gamma_P     for every P in S.

All comparisons are exact. With Gamma = a/b and beta1 = c/d (lowest
terms) the place condition becomes d_P^{bd} <= k^{ad} h^{-ca}, which only
involves integer powers of rationals.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import polys
from .errors import DomainError, InvalidDegreeError, PrecisionError
from .padic import PAdicRootApprox, padic_distance

INF = "inf"


def as_fraction(x) -> Fraction:
    """Rational from int, Fraction, or a decimal/fraction string (floats via repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


# ------------------------------------------------------------------ tuples

def _compositions(v: int, m: int) -> np.ndarray:
    """All non-negative integer m-vectors with sum v, colexicographic order."""
    dtype = np.int8 if v < 127 else (np.int16 if v < 32000 else np.int64)
    if m == 1:
        return np.array([[v]], dtype=dtype)
    # table[s] = compositions of s into j parts, built up j = 1..m-1
    table = [np.array([[s]], dtype=dtype) for s in range(v + 1)]
    for j in range(2, m):
        new = []
        for s in range(v + 1):
            blocks = []
            for x in range(s + 1):
                prev = table[s - x]
                blk = np.empty((prev.shape[0], j), dtype=dtype)
                blk[:, :-1] = prev
                blk[:, -1] = x
                blocks.append(blk)
            new.append(np.concatenate(blocks))
        table = new
    blocks = []
    for x in range(v + 1):
        prev = table[v - x]
        blk = np.empty((prev.shape[0], m), dtype=dtype)
        blk[:, :-1] = prev
        blk[:, -1] = x
        blocks.append(blk)
    return np.concatenate(blocks)


@dataclass(frozen=True)
class GammaTupleSet:
    beta: Fraction
    beta1: Fraction
    t: int
    v: int
    tuples: np.ndarray = field(repr=False, compare=False)

    @property
    def lam(self) -> Fraction:
        return self.beta / self.beta1 - 1

    def __len__(self):
        return int(self.tuples.shape[0])

    def gammas(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(f), self.v) for f in self.tuples[i])

    def expected_size(self) -> int:
        return math.comb(self.v + self.t, self.t)

    def size_bound_holds(self) -> bool:
        """|S| <= 2^{(beta/(beta-beta1))(t+1)}, compared exactly."""
        e = self.beta / (self.beta - self.beta1) * (self.t + 1)
        return len(self) ** e.denominator <= 2**e.numerator

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"f{i}" for i in range(self.t + 1)])
        for row in self.tuples:
            w.writerow([int(x) for x in row])
        return buf.getvalue()


def gamma_v(beta, beta1, t: int) -> int:
    beta, beta1 = as_fraction(beta), as_fraction(beta1)
    if not beta > beta1 > 0:
        raise DomainError("gamma_tuples: need beta > beta1 > 0")
    if t < 0:
        raise DomainError("gamma_tuples: t must be >= 0")
    lam = beta / beta1 - 1
    return 1 + math.floor((t + 1) / lam)


def gamma_tuples(beta, beta1, t: int) -> GammaTupleSet:
    """All (f_0..f_t) >= 0 with sum v, where v = 1 + floor((t+1)/lambda)."""
    beta, beta1 = as_fraction(beta), as_fraction(beta1)
    v = gamma_v(beta, beta1, t)
    return GammaTupleSet(beta, beta1, t, v, _compositions(v, t + 1))


# ------------------------------------------------------------------ places

@dataclass
class RealRoot:
    """A real root of a squarefree integer polynomial, held as an isolating interval."""

    core: list
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        # enough width for a faithful float value; exact checks refine further
        scale = max(abs(self.lo), abs(self.hi), Fraction(1))
        if self.hi - self.lo > scale / 2**64:
            self.refine(scale / 2**64)

    @classmethod
    def of(cls, f, index: int = 0) -> "RealRoot":
        intervals, core = polys.isolate_real_roots([int(c) for c in f])
        if not intervals:
            raise DomainError("polynomial has no real root")
        lo, hi = intervals[index]
        return cls(core, lo, hi)

    @classmethod
    def all_of(cls, f) -> list["RealRoot"]:
        intervals, core = polys.isolate_real_roots([int(c) for c in f])
        return [cls(core, lo, hi) for lo, hi in intervals]

    def refine(self, width) -> None:
        self.lo, self.hi = polys.refine_root(self.core, self.lo, self.hi, Fraction(width))

    def __float__(self):
        return float((self.lo + self.hi) / 2)


@dataclass
class ApproxSystem:
    k: Fraction
    beta1: Fraction
    places: list  # INF or a prime, aligned with roots and gammas
    roots: list  # RealRoot for INF, PAdicRootApprox for primes
    gammas: tuple

    def __post_init__(self):
        self.k = as_fraction(self.k)
        self.beta1 = as_fraction(self.beta1)
        self.gammas = tuple(as_fraction(g) for g in self.gammas)
        if self.k < 1:
            raise DomainError("ApproxSystem: k must be >= 1")
        if self.beta1 <= 0:
            raise DomainError("ApproxSystem: beta1 must be > 0")
        if not (len(self.places) == len(self.roots) == len(self.gammas)):
            raise DomainError("ApproxSystem: places, roots and gammas must align")
        if sum(self.gammas) != 1 or any(g < 0 for g in self.gammas):
            raise DomainError("ApproxSystem: weights must be >= 0 and sum to 1")
        for P, z in zip(self.places, self.roots):
            if P == INF and not isinstance(z, RealRoot):
                raise DomainError("ApproxSystem: real place needs a RealRoot")
            if P != INF and not (isinstance(z, PAdicRootApprox) and z.P == P):
                raise DomainError(f"ApproxSystem: place {P} needs a {P}-adic root")


@dataclass(frozen=True)
class PlaceReport:
    place: object
    gamma: Fraction
    holds: bool
    margin: float  # log(rhs) - log(lhs); >= 0 iff the place condition holds


@dataclass(frozen=True)
class SystemReport:
    holds: bool
    height_ok: bool
    places: tuple

    def to_json(self):
        return {
            "holds": self.holds,
            "height_ok": self.height_ok,
            "places": [
                {"place": str(r.place), "gamma": str(r.gamma), "holds": r.holds,
                 "margin": r.margin}
                for r in self.places
            ],
        }


def _rhs_parts(k: Fraction, beta1: Fraction, gamma: Fraction, h: int):
    """The condition  x <= (k h^-beta1)^gamma  is  x^E <= R  with E = bd, R = k^{ad} h^{-ca}."""
    a, b = gamma.numerator, gamma.denominator
    c, d = beta1.numerator, beta1.denominator
    E = b * d
    R = k ** (a * d) / Fraction(h) ** (c * a)
    return E, R


def _log_rhs(k, beta1, gamma, h) -> float:
    return float(gamma) * (math.log(k) - float(beta1) * math.log(h))


def _check_real(z: RealRoot, x: Fraction, E: int, R: Fraction, max_refine: int = 400):
    if R >= 1:
        return True
    for _ in range(max_refine):
        lo, hi = z.lo, z.hi
        if lo == hi:
            d = abs(lo - x)
            return d**E <= R
        dhi = max(abs(hi - x), abs(lo - x))
        if x <= lo:
            dlo = lo - x
        elif x >= hi:
            dlo = x - hi
        else:
            dlo = Fraction(0)
        if min(dhi, 1) ** E <= R:
            return True
        if min(dlo, 1) ** E > R:
            return False
        z.refine((hi - lo) / 16)
    raise PrecisionError("real place undecided after refinement", place=INF)


def check_place(sys: ApproxSystem, i: int, p: int, q: int) -> PlaceReport:
    P, z, g = sys.places[i], sys.roots[i], sys.gammas[i]
    h = max(abs(p), abs(q))
    if g == 0:
        return PlaceReport(P, g, True, math.inf)
    E, R = _rhs_parts(sys.k, sys.beta1, g, h)
    x = Fraction(p, q)
    lr = _log_rhs(sys.k, sys.beta1, g, h)
    if P == INF:
        ok = _check_real(z, x, E, R)
        dist = abs(float(z) - float(x))
        lhs = math.log(min(1.0, dist)) if dist > 0 else -math.inf
        return PlaceReport(P, g, ok, lr - lhs)
    dist, exact = padic_distance(z, p, q)
    ok = dist**E <= R
    if not exact and not ok:
        # only an upper bound on the distance is known and it is not small enough
        raise PrecisionError(f"{P}-adic precision N={z.N} too low", place=P, needed=z.N + 1)
    return PlaceReport(P, g, ok, lr - math.log(dist))


def check_system(sys: ApproxSystem, p: int, q: int) -> SystemReport:
    """Exact check of every place condition for p/q (gcd(p, q) = 1, q > 0)."""
    p, q = int(p), int(q)
    if q <= 0 or math.gcd(p, q) != 1:
        raise DomainError("check_system: need gcd(p, q) = 1 and q > 0")
    reports = tuple(check_place(sys, i, p, q) for i in range(len(sys.places)))
    h = max(abs(p), q)
    c, d = sys.beta1.numerator, sys.beta1.denominator
    height_ok = Fraction(h) ** c >= sys.k**d
    return SystemReport(all(r.holds for r in reports), height_ok, reports)


def check_inequality(k, beta, places, roots, p: int, q: int) -> bool:
    """prod_P min(1, |zeta_P - p/q|_P) <= k |p,q|^-beta, with beta rational.

    Real-place distances are bracketed by refinement; p-adic ones are exact or
    raise PrecisionError.
    """
    k, beta = as_fraction(k), as_fraction(beta)
    h = max(abs(p), abs(q))
    c, d = beta.numerator, beta.denominator
    R = k**d / Fraction(h) ** c  # compare prod^d <= R
    x = Fraction(p, q)
    padic = Fraction(1)
    real = None
    for P, z in zip(places, roots):
        if P == INF:
            real = z
        else:
            dist, exact = padic_distance(z, p, q)
            if not exact:
                raise PrecisionError(f"{P}-adic precision too low", place=P, needed=z.N + 1)
            padic *= dist
    if real is None:
        return padic**d <= R
    for _ in range(400):
        lo, hi = real.lo, real.hi
        if lo == hi:
            return (min(abs(lo - x), 1) * padic) ** d <= R
        dhi = max(abs(hi - x), abs(lo - x))
        dlo = lo - x if x <= lo else (x - hi if x >= hi else Fraction(0))
        if (min(dhi, 1) * padic) ** d <= R:
            return True
        if (min(dlo, 1) * padic) ** d > R:
            return False
        real.refine((hi - lo) / 16)
    raise PrecisionError("real place undecided after refinement", place=INF)


# ------------------------------------------------------------------ gap principle

def _iroot_floor(x: int, d: int) -> int:
    """floor(x^(1/d)) by integer Newton iteration."""
    if x < 0:
        raise ValueError("negative radicand")
    if x < 2 or d == 1:
        return x
    r = 1 << -(-x.bit_length() // d)  # >= true root
    while True:
        nr = ((d - 1) * r + x // r ** (d - 1)) // d
        if nr >= r:
            break
        r = nr
    while r**d > x:
        r -= 1
    return r


def gap_threshold(k, beta1, h1: int):
    """(1/(2k)) h1^{beta1-1}.

    A Fraction when exact; otherwise a (lo, hi) pair of Fractions enclosing
    the value with hi - lo <= 1e-30 * hi.
    """
    k, beta1 = as_fraction(k), as_fraction(beta1)
    h1 = int(h1)
    c, d = beta1.numerator, beta1.denominator
    if not Fraction(h1) ** c > k**d:
        raise DomainError("gap_threshold: need h1 > k^(1/beta1)")
    num, den = c - d, d  # exponent beta1 - 1 = num/den
    base = Fraction(h1) ** num if num >= 0 else Fraction(1, h1 ** (-num))
    # exact d-th root?
    rn = _iroot_floor(base.numerator, den)
    rd = _iroot_floor(base.denominator, den)
    if rn**den == base.numerator and rd**den == base.denominator:
        return Fraction(rn, rd) / (2 * k)
    scale = 10**32
    lo_num = _iroot_floor(base.numerator * scale**den // base.denominator, den)
    lo = Fraction(lo_num, scale)
    hi = Fraction(lo_num + 1, scale)
    return (lo / (2 * k), hi / (2 * k))


def gap_holds(k, beta1, h1: int, h2: int) -> bool:
    """Exact test of h2 >= (1/(2k)) h1^{beta1-1}."""
    k, beta1 = as_fraction(k), as_fraction(beta1)
    c, d = beta1.numerator, beta1.denominator
    # (2k h2)^d >= h1^{c-d}
    return (2 * k * h2) ** d >= Fraction(h1) ** (c - d)


# ------------------------------------------------------------------ count bounds

def system_count_bound(n: int, beta1) -> float:
    """2^30 delta^-3 log(3n) log(delta^-1 log(3n)), delta = 1 - 2/beta1."""
    beta1 = as_fraction(beta1)
    if n < 3:
        raise InvalidDegreeError("count bound: n must be >= 3")
    if beta1 <= 2:
        raise DomainError("count bound: beta1 must be > 2")
    delta = 1 - 2 / float(beta1)
    L = math.log(3 * n)
    return 2.0**30 * delta**-3 * L * math.log(L / delta)


def system_height_floor(k, beta1, H) -> float:
    """(4k)^{2/(beta1-2)} H."""
    k, beta1 = as_fraction(k), as_fraction(beta1)
    if beta1 <= 2:
        raise DomainError("count bound: beta1 must be > 2")
    return float(4 * k) ** (2 / float(beta1 - 2)) * float(H)


def classify_solution(F, S, Z: int, p: int, q: int) -> str:
    """large / medium / small by the height thresholds (4Z)^{1/(n-2)} and Z^{1/(n-1)}."""
    from .forms import coerce

    F = coerce(F)
    n = F.degree
    if n <= 2:
        raise InvalidDegreeError("classify_solution: degree must be >= 3")
    if p == 0 and q == 0:
        raise DomainError("classify_solution: (p, q) = (0, 0)")
    h = max(abs(int(p)), abs(int(q)))
    if h ** (n - 2) >= 4 * Z:
        return "large"
    if h ** (n - 1) >= Z:
        return "medium"
    return "small"


# ------------------------------------------------------------------ enumeration

def _vp_array(x: np.ndarray, P: int, cap: int) -> np.ndarray:
    v = np.zeros(x.shape, dtype=np.int64)
    cur = x.copy()
    alive = cur != 0
    v[~alive] = cap
    for _ in range(cap):
        div = alive & (cur % P == 0)
        if not div.any():
            break
        v[div] += 1
        cur = np.where(div, cur // P, cur)
    return np.minimum(v, cap)


def enumerate_solutions(sys: ApproxSystem, H: int, min_height: int = 1):
    """All p/q (gcd 1, q > 0) with min_height <= max(|p|, q) <= H solving the system.

    A float pre-screen with generous slack proposes candidates; each one is
    then confirmed by :func:`check_system`.
    """
    sols = []
    qs = np.arange(1, H + 1, dtype=np.int64)
    ps = np.arange(-H, H + 1, dtype=np.int64)
    rows = max(1, (1 << 18) // ps.size)
    for start in range(0, qs.size, rows):
        Q, Pp = np.meshgrid(qs[start:start + rows], ps, indexing="ij")
        Q, Pp = Q.ravel(), Pp.ravel()
        h = np.maximum(np.abs(Pp), Q)
        ok = (np.gcd(Pp, Q) == 1) & (h >= min_height)
        Q, Pp, h = Q[ok], Pp[ok], h[ok]
        logh = np.log(h.astype(np.float64))
        keep = np.ones(Q.shape, dtype=bool)
        for P, z, g in zip(sys.places, sys.roots, sys.gammas):
            if g == 0:
                continue
            rhs = float(g) * (math.log(sys.k) - float(sys.beta1) * logh)
            if P == INF:
                x = Pp / Q
                # lower bound on the distance despite float rounding
                d = np.abs(float(z) - x) - 1e-15 * (1.0 + np.abs(x))
                lhs = np.log(np.maximum(np.minimum(d, 1.0), 1e-300))
                keep &= lhs <= rhs + 1e-6
            else:
                # screen with the digits that fit comfortably in int64
                e = z.N
                while P**e * (H + 1) > 2**62:
                    e -= 1
                mod = P**e
                qm = Q % P != 0
                if z.pole:
                    # distance is 1 unless P | q; leave those to the exact check
                    lhs = np.where(qm, 0.0, -np.inf)
                else:
                    # for a unit q, |p/q - z|_P = |p - z q|_P
                    diff = (Pp - (z.residue % mod) * Q) % mod
                    vals = _vp_array(diff, P, e)
                    # agreement on all screened digits only bounds the distance: keep it
                    lhs = np.where(qm, np.where(vals >= e, -np.inf, -vals * math.log(P)), 0.0)
                keep &= lhs <= rhs + 1e-6
        for p, q in zip(Pp[keep].tolist(), Q[keep].tolist()):
            try:
                if check_system(sys, p, q).holds:
                    sols.append((p, q))
            except PrecisionError:
                sols.append((p, q))  # kept; callers see the precision issue on recheck
    sols.sort(key=lambda s: (max(abs(s[0]), s[1]), s[0], s[1]))
    return sols


def gap_violations(sys: ApproxSystem, sols: Sequence) -> list:
    """Pairs (s1, s2) of solutions that break the gap bound (expected: none)."""
    k, b1 = sys.k, sys.beta1
    c, d = b1.numerator, b1.denominator
    bad = []
    hs = [max(abs(p), q) for p, q in sols]
    for i, (s1, h1) in enumerate(zip(sols, hs)):
        if not Fraction(h1) ** c > k**d:
            continue
        for s2, h2 in zip(sols[i + 1:], hs[i + 1:]):
            if h2 >= h1 and not gap_holds(k, b1, h1, h2):
                bad.append((s1, s2))
    return bad
