"""P-adic valuations, roots of integer polynomials, and local densities.

Polynomials here are low-first integer lists (``f[i]`` is the coefficient of
X^i), as in :mod:`thuemahler.polys`.

Root finding walks the residue tree: a class ``r mod P^L`` is dropped when
``f(r) != 0 mod P^L``, and is *decided* once ``v(f(r)) > 2 v(f'(r))`` and
``L > v(f'(r))``; then it holds exactly one root, which Newton iteration
lifts to any precision. Classes still open at the depth cap are reported as
undecided instead of being dropped.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith, polys
from .errors import DomainError, PrecisionError, UnsupportedInstanceError
from .forms import BinaryForm, coerce

INFINITE_VALUATION = math.inf


def valuation(r, P: int):
    """v_P(r) for a non-zero rational; ``math.inf`` for r = 0."""
    r = Fraction(r)
    if r == 0:
        return INFINITE_VALUATION
    return arith.vp(r.numerator, P) - arith.vp(r.denominator, P)


def _v(x: int, P: int, cap: int) -> int:
    """v_P(x) capped at ``cap`` (x == 0 gives cap)."""
    if x == 0:
        return cap
    e = 0
    while e < cap and x % P == 0:
        x //= P
        e += 1
    return e


@dataclass(frozen=True)
class PAdicRootApprox:
    """A root of f in Z_P known modulo P^N.

    With ``pole=True`` the residue describes w = 1/zeta, a root of the reversed
    polynomial with P | w, i.e. zeta lies in Q_P but not in Z_P.
    """

    P: int
    N: int
    residue: int
    simple: bool
    pole: bool = False

    def check(self, f) -> bool:
        f = polys.trim(list(f))
        g = polys.trim(list(reversed(f))) if self.pole else f
        return polys.evaluate(g, self.residue) % self.P**self.N == 0


@dataclass(frozen=True)
class UndecidedBranch:
    P: int
    level: int
    residue: int
    pole: bool = False


class RootList(list):
    """List of roots with the undecided branches attached as ``.undecided``."""

    def __init__(self, roots=(), undecided=()):
        super().__init__(roots)
        self.undecided = list(undecided)

    @property
    def complete(self) -> bool:
        return not self.undecided


def _roots_mod_p(f, P):
    """Residues r in [0, P) with f(r) = 0 mod P (vectorised Horner)."""
    red = [c % P for c in f]
    if not any(red):
        return list(range(P))
    if P < 3_000_000_000:
        u = np.arange(P, dtype=np.int64)
        acc = np.zeros(P, dtype=np.int64)
        for c in reversed(red):
            acc = (acc * u + c) % P
        return [int(x) for x in np.flatnonzero(acc == 0)]
    raise DomainError("prime too large for residue search")  # pragma: no cover


def _newton(f, df, a, e, P, N):
    """Lift a decided class to a root modulo P^N (v(f(a)) > 2e, e = v(f'(a)))."""
    mod = P ** (N + 2 * e + 2)
    while True:
        fa = polys.evaluate(f, a)
        if fa == 0 or _v(fa, P, N + e + 1) - e >= N:
            return a % P**N
        da = polys.evaluate(df, a)
        pe = P**e
        # step = f(a)/f'(a) computed via the unit part of f'(a)
        unit = (da // pe) % mod
        step = (fa // pe) * pow(unit, -1, mod)
        a = (a - step) % mod


def _search(f, P, N, cap, start):
    """Branch-and-lift from the given (residue, level) nodes."""
    df = polys.derivative(f)
    roots, undecided = [], []
    stack = list(reversed(start))
    while stack:
        r, L = stack.pop()
        fr = polys.evaluate(f, r)
        if fr % P**L:
            continue
        dr = polys.evaluate(df, r)
        if dr != 0:
            e = _v(dr, P, 10**9)
            vf = _v(fr, P, 2 * e + 1)
            if vf > 2 * e and L > e:
                root = _newton(f, df, r, e, P, N)
                roots.append((root, e == 0))
                continue
        if L >= cap:
            undecided.append((r, L))
            continue
        PL = P**L
        for i in reversed(range(P)):
            stack.append((r + i * PL, L + 1))
    return roots, undecided


def _depth_cap(f, P):
    core = polys.squarefree_part(f)
    if polys.deg(core) < 2:
        return 4
    D = polys.discriminant(core)
    return 4 * (arith.vp(D, P) + 1) if D else 4


def padic_roots(f, P: int, N: int, include_poles: bool = True, depth_cap=None) -> RootList:
    """Roots of f in Z_P (and, via the reversed polynomial, in Q_P minus Z_P).

    Every root appears once, as a residue modulo P^N. Repeated factors are
    removed first (they do not change the root set).
    """
    f = polys.trim([int(c) for c in f])
    if not any(f):
        raise DomainError("padic_roots: f must be non-zero")
    if N < 1:
        raise DomainError("padic_roots: precision N must be >= 1")
    if not arith.is_prime(P):
        raise DomainError(f"padic_roots: {P} is not prime")
    core = polys.squarefree_part(f)
    if polys.deg(core) < 1:
        return RootList()
    # dividing out the P-part of the content does not change the roots
    c = polys.content(core)
    core = [x // c for x in core]
    cap = depth_cap if depth_cap is not None else _depth_cap(core, P)
    out, und = [], []
    # simplicity refers to f itself (a repeated factor makes f' vanish at the root)
    df = polys.derivative(f)
    start = [(r, 1) for r in _roots_mod_p(core, P)]
    rts, un = _search(core, P, N, cap, start)
    out += [PAdicRootApprox(P, N, r, polys.evaluate(df, r) % P != 0) for r, _ in rts]
    und += [UndecidedBranch(P, L, r) for r, L in un]
    if include_poles:
        rev = polys.trim(list(reversed(core)))
        drev = polys.derivative(polys.trim(list(reversed(f))))
        # w = 0 is never a root of the reversal since deg f is exact
        if rev[0] % P == 0:
            rts, un = _search(rev, P, N, cap, [(0, 1)])
            out += [PAdicRootApprox(P, N, r, polys.evaluate(drev, r) % P != 0, pole=True)
                    for r, _ in rts]
            und += [UndecidedBranch(P, L, r, pole=True) for r, L in un]
    out.sort(key=lambda z: (z.pole, z.residue))
    return RootList(out, und)


def has_root_in_QP(f, P: int) -> bool:
    """True if f has a root in Q_P; raises PrecisionError when undecided."""
    rl = padic_roots(f, P, 1)
    if len(rl):
        return True
    if rl.undecided:
        raise PrecisionError(f"root existence at P={P} undecided at depth cap", place=P)
    return False


def padic_distance(z: PAdicRootApprox, p: int, q: int):
    """min(1, |zeta - p/q|_P) as (Fraction, exact).

    When the residues agree to full precision the upper bound P^-N (pole case:
    the analogous bound) is returned with ``exact=False``.
    """
    P, N = z.P, z.N
    p, q = int(p), int(q)
    if q == 0 and p == 0:
        raise DomainError("padic_distance: (p, q) = (0, 0)")
    mod = P**N
    if not z.pole:
        if q % P == 0:
            # |p/q|_P > 1 >= |zeta|_P
            return Fraction(1), True
        x = p * pow(q, -1, mod) % mod
        d = (z.residue - x) % mod
        if d == 0:
            return Fraction(1, mod), False
        return Fraction(1, P ** _v(d, P, N)), True
    # zeta = 1/w with v(w) >= 1
    if q % P != 0:
        return Fraction(1), True
    if p % P == 0:
        raise DomainError("padic_distance: p and q share the factor P")
    vu = _v(q, P, 10**9)
    u = q * pow(p, -1, mod) % mod
    w = z.residue % mod
    if w == 0:
        if vu < N:
            # v(w) >= N > v(u): |zeta - p/q| = |1/w| >= 1
            return Fraction(1), True
        return Fraction(1), False
    vw = _v(w, P, N)
    d = (u - w) % mod
    if d == 0:
        e = vw + vu - N
        return (Fraction(1) if e >= 0 else Fraction(1, P**-e)), False
    e = vw + vu - _v(d, P, N)
    return (Fraction(1) if e >= 0 else Fraction(1, P**-e)), True


def relift(z: PAdicRootApprox, f, N: int) -> PAdicRootApprox:
    """The same root at precision N (N >= z.N)."""
    for r in padic_roots(f, z.P, N):
        if r.pole == z.pole and r.residue % z.P**z.N == z.residue % z.P**z.N:
            return r
    raise PrecisionError("root does not survive re-lifting; precision too low to separate roots",
                         place=z.P, needed=N)


# ---------------------------------------------------------------- densities

def count_roots_mod(f, P: int, e: int) -> int:
    """#{u mod P^e : f(u) = 0 mod P^e} by lifting (one child per Hensel-simple root)."""
    if e <= 0:
        return 1
    f = [int(c) for c in f]
    if not any(f):
        return P**e
    df = polys.derivative(f)
    level = _roots_mod_p(f, P)
    count_simple = 0
    cur = []
    for r in level:
        if polys.evaluate(df, r) % P:
            count_simple += 1
        else:
            cur.append(r)
    for j in range(1, e):
        PJ = P**j
        nxt = []
        for r in cur:
            for i in range(P):
                x = r + i * PJ
                if polys.evaluate(f, x) % (PJ * P) == 0:
                    nxt.append(x)
        cur = nxt
    return count_simple + len(cur)


def _g_h(F: BinaryForm, P: int, e: int):
    """Affine root count g_e and the count h_e of w = 0 mod P with F(1, w) = 0 mod P^e."""
    f = F.dehomogenize()
    g = count_roots_mod(f, P, e)
    fy = list(F.coeffs)  # F(1, w) low-first in w
    # roots of F(1, w) that are divisible by P: substitute w = P w'
    if e <= 0:
        return g, 1
    h_poly = [c * P**i for i, c in enumerate(fy)]
    # w = P w' with w' mod P^{e-1}; count w' mod P^{e-1} with h_poly(w') = 0 mod P^e
    h = _count_scaled(h_poly, P, e)
    return g, h


def _count_scaled(hp, P, e):
    """#{w' mod P^{e-1} : hp(w') = 0 mod P^e}."""
    if hp[0] % P:
        return 0
    if e == 1:
        return 1 if hp[0] % P == 0 else 0
    # solutions are determined mod P^{e-1}; lift residue classes level by level
    cur = [0]  # classes modulo P^0
    for j in range(0, e - 1):
        Pj = P**j
        nxt = []
        for r in cur:
            for i in range(P):
                x = r + i * Pj
                # x is a class mod P^{j+1}; f(x + P^{j+1} y) = f(x) mod P^{j+2}
                # when every coefficient of hp' carries a factor P (true here)
                if polys.evaluate(hp, x) % P ** (j + 2) == 0:
                    nxt.append(x)
        cur = nxt
    return len(cur)


def rho_prime_power(F: BinaryForm, P: int, k: int) -> int:
    """rho_F(P^k) by splitting pairs on min(v(i), v(j))."""
    n = F.degree
    total = 1  # the pair (0, 0)
    cache = {}
    for s in range(k):
        L = k - s
        e = max(k - n * s, 0)
        if e == 0:
            total += P ** (2 * L) - P ** (2 * L - 2)
            continue
        if e not in cache:
            cache[e] = sum(_g_h(F, P, e))
        total += P ** (2 * (L - e)) * (P - 1) * P ** (e - 1) * cache[e]
    return total


def rho_bruteforce(F: BinaryForm, m: int) -> int:
    return sum(1 for i in range(m) for j in range(m) if F(i, j) % m == 0)


def rho(F, m: int) -> int:
    """rho_F(m) = #{(i, j) mod m : F(i, j) = 0 mod m}."""
    F = coerce(F)
    m = int(m)
    if m < 1:
        raise DomainError("rho: m must be >= 1")
    if m == 1:
        return 1
    out = 1
    for P, k in arith.factorize(m).factors:
        out *= rho_prime_power(F, P, k)
    return out


def _require_squarefree(F: BinaryForm):
    from .forms import discriminant

    if F.degree < 2 or discriminant(F) == 0:
        raise UnsupportedInstanceError("local measures need a form without repeated factors")


def measure_at_least(F: BinaryForm, P: int, j: int) -> Fraction:
    """Haar measure of primitive (x, y) in Z_P^2 with v_P(F(x, y)) >= j."""
    if j <= 0:
        return 1 - Fraction(1, P * P)
    g, h = _g_h(F, P, j)
    return Fraction((P - 1) * (g + h), P ** (j + 1))


def local_measure(F, P: int, j: int) -> Fraction:
    """m_{P,j}: measure of primitive pairs with v_P(F) exactly j."""
    F = coerce(F)
    _require_squarefree(F)
    if j < 0:
        raise DomainError("local_measure: j must be >= 0")
    return measure_at_least(F, P, j) - measure_at_least(F, P, j + 1)


def _stable_root_mass(f, P):
    """(c, j0) with #{u mod P^j : f(u) = 0 mod P^j} = c for all j >= j0,
    from the decided residue classes; None if some branch stays undecided."""
    f = polys.trim(f)
    if not any(f) or polys.deg(f) < 1:
        return (0, 1) if any(f) else None
    core = f
    df = polys.derivative(core)
    cap = _depth_cap(core, P)
    stack = [(r, 1) for r in reversed(_roots_mod_p(core, P))]
    c, j0 = 0, 1
    while stack:
        r, L = stack.pop()
        fr = polys.evaluate(core, r)
        if fr % P**L:
            j0 = max(j0, L)
            continue
        dr = polys.evaluate(df, r)
        if dr != 0:
            e = _v(dr, P, 10**9)
            if _v(fr, P, 2 * e + 1) > 2 * e and L > e:
                c += P**e
                j0 = max(j0, L + e)
                continue
        if L >= cap:
            return None
        PL = P**L
        for i in reversed(range(P)):
            stack.append((r + i * PL, L + 1))
    return c, j0


def _stable_pole_mass(F: BinaryForm, P: int):
    """Same for w = 0 mod P with F(1, w) = 0 mod P^j."""
    fy = polys.trim(list(F.coeffs))
    if fy[0] % P:
        return 0, 1
    df = polys.derivative(fy)
    cap = _depth_cap(fy, P)
    stack = [(0, 1)]
    c, j0 = 0, 1
    while stack:
        r, L = stack.pop()
        fr = polys.evaluate(fy, r)
        if fr % P**L:
            j0 = max(j0, L)
            continue
        dr = polys.evaluate(df, r)
        if dr != 0:
            e = _v(dr, P, 10**9)
            if _v(fr, P, 2 * e + 1) > 2 * e and L > e:
                c += P**e
                j0 = max(j0, L + e)
                continue
        if L >= cap:
            return None
        PL = P**L
        for i in reversed(range(P)):
            stack.append((r + i * PL, L + 1))
    return c, j0


@dataclass(frozen=True)
class LocalFactor:
    P: int
    J: int
    value: float
    tail_bound: float | None
    measures: tuple  # exact m_{P,j}, j = 0..J

    def interval(self):
        if self.tail_bound is None:
            return self.value, math.inf
        return self.value, self.value + self.tail_bound


def local_factor(F, P: int, J: int) -> LocalFactor:
    """s_P = sum_{j<=J} P^{2j/n} m_{P,j} with a rigorous bound on the remainder.

    Past the level where every residue class is Hensel-decided, the number of
    roots mod P^j is a constant c, so m_{P,j} = (1 - 1/P)^2 c P^-j and the
    remainder is a geometric series in P^{-(1 - 2/n)}.
    """
    F = coerce(F)
    n = F.degree
    if n < 3:
        raise DomainError("local_factor: degree must be >= 3")
    _require_squarefree(F)
    if J < 0:
        raise DomainError("local_factor: J must be >= 0")
    ms = [local_measure(F, P, j) for j in range(J + 1)]
    value = math.fsum(P ** (2 * j / n) * float(m) for j, m in enumerate(ms))
    a = _stable_root_mass(F.dehomogenize(), P)
    b = _stable_pole_mass(F, P)
    if a is None or b is None:
        return LocalFactor(P, J, value, None, tuple(ms))
    c = a[0] + b[0]
    j0 = max(a[1], b[1])
    tail = 0.0
    # exact terms between J and the stable range, then the closed form
    for j in range(J + 1, max(j0, J + 1)):
        tail += P ** (2 * j / n) * float(local_measure(F, P, j))
    start = max(j0, J + 1)
    r = P ** (-(1 - 2 / n))
    if c:
        tail += (1 - 1 / P) ** 2 * c * r**start / (1 - r)
    # outward rounding for the float sums
    tail = tail * (1 + 1e-12) + 1e-300 if tail else 0.0
    return LocalFactor(P, J, value, tail, tuple(ms))


def density_csv(F, P: int, J: int) -> str:
    """CSV rows (P, j, count, denominator) with m_{P,j} = count / denominator."""
    F = coerce(F)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["P", "j", "count", "denominator"])
    for j in range(J + 1):
        m = local_measure(F, P, j)
        den = P ** (2 * (j + 1))
        w.writerow([P, j, int(m * den), den])
    return buf.getvalue()


def rho_csv(F, ms) -> str:
    F = coerce(F)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "rho", "denominator"])
    for m in ms:
        w.writerow([m, rho(F, m), m * m])
    return buf.getvalue()
