"""Univariate polynomials over Z, Q and Z/pZ.

Polynomials are plain lists of coefficients, lowest degree first
(``[c0, c1, ..., cd]``), with no trailing zeros except for the zero
polynomial ``[]``.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

# ---------------------------------------------------------------------------
# generic ring operations (work for int and Fraction coefficients)


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a) -> int:
    return len(a) - 1 if a else -1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    return add(a, [-c for c in b])


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def scale(a, c):
    return trim([c * x for x in a])


def derivative(a):
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def power(a, e: int):
    out = [1]
    for _ in range(e):
        out = mul(out, a)
    return out


def divmod_q(a, b):
    """Division with remainder over Q."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = Fraction(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lb
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = trim(a)
    return trim(q), a


def exact_div_z(a, b):
    """a / b over Z; raises ValueError when b does not divide a."""
    q, r = divmod_q(a, b)
    if r or any(c.denominator != 1 for c in q):
        raise ValueError("not divisible over Z")
    return [int(c) for c in q]


def content(a) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, int(c))
    return g


def primitive(a):
    """Primitive integer polynomial with positive leading coefficient."""
    a = trim(a)
    if not a:
        return []
    if any(isinstance(c, Fraction) and c.denominator != 1 for c in a):
        den = math.lcm(*(Fraction(c).denominator for c in a))
        a = [int(Fraction(c) * den) for c in a]
    a = [int(c) for c in a]
    g = content(a)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def gcd_z(a, b):
    """Primitive gcd of two integer polynomials."""
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_q(a, b)
        a, b = b, r
    return primitive(a) if a else []


def resultant(a, b) -> int:
    """Res(a, b) via a fraction-free (Bareiss) determinant of the Sylvester matrix."""
    m, n = deg(a), deg(b)
    if m < 0 or n < 0:
        return 0
    if m == 0 and n == 0:
        return 1
    size = m + n
    rows = []
    hi_a, hi_b = list(reversed(a)), list(reversed(b))
    for i in range(n):
        rows.append([0] * i + hi_a + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + hi_b + [0] * (size - n - 1 - i))
    return bareiss_det(rows)


def bareiss_det(mat) -> int:
    a = [list(map(int, row)) for row in mat]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def discriminant(a) -> int:
    """(-1)^{d(d-1)/2} Res(a, a') / lc(a)."""
    d = deg(a)
    if d < 1:
        raise ValueError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    r = resultant(a, derivative(a))
    s = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(s * r, a[-1])
    assert rem == 0
    return q


def squarefree_decomposition(a):
    """Yun's algorithm: returns [(g_i, i)] with a = c * prod g_i^i, g_i primitive squarefree."""
    a = primitive(a)
    out = []
    if deg(a) < 1:
        return out
    da = derivative(a)
    b = gcd_z(a, da)
    c = exact_div_rat(a, b)
    d = sub_rat(exact_div_rat(da, b), derivative(c))
    i = 1
    while deg(c) > 0:
        g = gcd_z(c, d) if d else primitive(c)
        if deg(g) > 0:
            out.append((g, i))
        c2 = exact_div_rat(c, g)
        d = sub_rat(exact_div_rat(d, g), derivative(c2)) if d else []
        c = c2
        i += 1
    return out


def exact_div_rat(a, b):
    q, r = divmod_q(a, b)
    assert not r
    return q


def sub_rat(a, b):
    return trim([Fraction(x) for x in sub(a, b)])


# ---------------------------------------------------------------------------
# arithmetic in F_p[x]


def _mtrim(a, p):
    return trim([c % p for c in a])


def _mdivmod(a, b, p):
    a = _mtrim(a, p)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - c * y) % p
        a = trim(a)
    return trim(q), a


def _mmul(a, b, p):
    return _mtrim(mul(a, b), p)


def _mmonic(a, p):
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _mgcd(a, b, p):
    a, b = _mtrim(a, p), _mtrim(b, p)
    while b:
        a, b = b, _mdivmod(a, b, p)[1]
    return _mmonic(a, p) if a else []


def _mpowmod(base, e, mod, p):
    out = [1]
    base = _mdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            out = _mdivmod(_mmul(out, base, p), mod, p)[1]
        base = _mdivmod(_mmul(base, base, p), mod, p)[1]
        e >>= 1
    return out


def _mxgcd(a, b, p):
    """s, t with s a + t b = 1 mod p (a, b coprime)."""
    r0, r1 = _mtrim(a, p), _mtrim(b, p)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = _mdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _mtrim(sub(s0, mul(q, s1)), p)
        t0, t1 = t1, _mtrim(sub(t0, mul(q, t1)), p)
    inv = pow(r0[0], -1, p)  # r0 is a non-zero constant
    return [c * inv % p for c in s0], [c * inv % p for c in t0]


def factor_mod_p(a, p, rng=None):
    """Monic irreducible factors of a squarefree polynomial modulo an odd prime p."""
    rng = rng or random.Random(p)
    f = _mmonic(_mtrim(a, p), p)
    x = [0, 1]
    found = []
    h = x
    d = 0
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = _mpowmod(h, p, f, p)
        g = _mgcd(_mtrim(sub(h, x), p), f, p)
        if deg(g) > 0:
            found.append((g, d))
            f = _mdivmod(f, g, p)[0]
            h = _mdivmod(h, f, p)[1]
    if deg(f) > 0:
        found.append((f, deg(f)))
    out = []
    for g, d in found:
        out.extend(_equal_degree_split(g, d, p, rng))
    return sorted(out)


def _equal_degree_split(g, d, p, rng):
    if deg(g) == d:
        return [g]
    while True:
        r = [rng.randrange(p) for _ in range(deg(g))]
        r = _mtrim(r, p)
        if deg(r) < 1:
            continue
        w = _mpowmod(r, (p**d - 1) // 2, g, p)
        w = _mtrim(sub(w, [1]), p)
        u = _mgcd(w, g, p)
        if 0 < deg(u) < deg(g):
            return _equal_degree_split(u, d, p, rng) + _equal_degree_split(
                _mdivmod(g, u, p)[0], d, p, rng
            )


# ---------------------------------------------------------------------------
# factorization over Z (Zassenhaus)


def _hensel_pair(f, g, h, p, k):
    """Lift f = g h (mod p), g monic, to f = G H (mod p^k)."""
    M = p**k
    s, t = _mxgcd(g, h, p)
    G, H = list(g), list(h)
    pj = p
    for _ in range(1, k):
        e = [c % M for c in sub(f, mul(G, H))]
        e = _mtrim([c // pj for c in e], p)
        if e:
            q, r = _mdivmod(_mmul(e, t, p), g, p)
            dh = _mtrim(add(mul(e, s), mul(q, h)), p)
            G = [c % M for c in add(G, scale(r, pj))]
            H = [c % M for c in add(H, scale(dh, pj))]
        pj *= p
    return trim(G), trim(H)


def _symmetric(a, M):
    return trim([c - M if c > M // 2 else c for c in (x % M for x in a)])


def _factor_squarefree_z(f):
    """Irreducible factors of a primitive squarefree integer polynomial."""
    if deg(f) <= 1:
        return [f]
    lc = f[-1]
    df = derivative(f)
    for p in itertools.islice((q for q in itertools.count(3, 2) if _is_small_prime(q)), 500):
        if lc % p == 0:
            continue
        if deg(_mgcd(f, df, p)) == 0:
            break
    else:  # pragma: no cover - a squarefree f has only finitely many bad primes
        raise RuntimeError("no suitable prime found")
    modular = factor_mod_p(f, p)
    if len(modular) == 1:
        return [f]
    norm = math.isqrt(sum(c * c for c in f)) + 1
    bound = 2 * abs(lc) * (2 ** deg(f)) * norm
    k = 1
    while p**k <= bound:
        k += 1
    M = p**k
    lifted = []
    rest = [c % M for c in f]
    factors = list(modular)
    while len(factors) > 1:
        g = factors.pop(0)
        h = [lc % p]
        for u in factors:
            h = _mmul(h, u, p)
        G, H = _hensel_pair(rest, g, h, p, k)
        lifted.append(G)
        rest = H
    inv = pow(rest[-1], -1, M)
    lifted.append([c * inv % M for c in rest])
    # recombination
    out = []
    remaining = list(lifted)
    cur = list(f)
    s = 1
    while 2 * s <= len(remaining):
        hit = False
        for combo in itertools.combinations(range(len(remaining)), s):
            g = [cur[-1]]
            for i in combo:
                g = [c % M for c in mul(g, remaining[i])]
            g = primitive(_symmetric(g, M))
            try:
                q = exact_div_z(cur, g)
            except ValueError:
                continue
            out.append(g)
            cur = q
            remaining = [u for i, u in enumerate(remaining) if i not in combo]
            hit = True
            break
        if not hit:
            s += 1
    out.append(primitive(cur))
    return out


def _is_small_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def factor_z(a):
    """Factor an integer polynomial: (content, [(irreducible primitive factor, multiplicity)]).

    content carries the sign so that content * prod(g^e) == a.
    """
    a = trim([int(c) for c in a])
    if not a:
        raise ValueError("cannot factor the zero polynomial")
    prim = primitive(a)
    cont = a[-1] // prim[-1]
    out = []
    if deg(prim) >= 1:
        for g, e in squarefree_decomposition(prim):
            for h in _factor_squarefree_z(g):
                out.append((primitive(h), e))
    out.sort(key=lambda ge: (deg(ge[0]), ge[0]))
    return cont, out


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(a):
    seq = [[Fraction(c) for c in a], [Fraction(c) for c in derivative(a)]]
    while seq[-1] and deg(seq[-1]) > 0:
        _, r = divmod_q(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x):
    signs = [s for s in (_sgn(evaluate(q, x)) for q in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _sgn(x):
    return (x > 0) - (x < 0)


def root_bound(a) -> int:
    """Cauchy bound: all complex roots have modulus < the returned integer."""
    lc = abs(a[-1])
    return 1 + max((abs(c) for c in a[:-1]), default=0) // lc + 1


def squarefree_part(a):
    a = trim(a)
    sq = gcd_z(a, derivative(a))
    core = exact_div_rat(a, sq) if deg(sq) > 0 else a
    return primitive(core)


def isolate_real_roots(a):
    """Isolating intervals for the distinct real roots of ``a``.

    Returns ``(intervals, core)`` where ``core`` is the squarefree part used
    for isolation. Each interval ``(lo, hi)`` holds exactly one root of
    ``core``; for ``lo < hi`` the endpoints have opposite signs, and
    ``lo == hi`` marks an exact rational root. Intervals are sorted.
    """
    a = trim(a)
    if deg(a) < 1:
        return [], a
    core = squarefree_part(a)
    seq = sturm_sequence(core)

    def count(lo, hi):  # roots in (lo, hi]
        return _sign_changes(seq, lo) - _sign_changes(seq, hi)

    B = Fraction(root_bound(core))
    out = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n > 1:
            mid = (lo + hi) / 2
            stack.append((lo, mid))
            stack.append((mid, hi))
            continue
        if evaluate(core, hi) == 0:
            out.append((hi, hi))
            continue
        # one root in (lo, hi]; make sure lo itself is not a (different) root
        while evaluate(core, lo) == 0:
            mid = (lo + hi) / 2
            if count(mid, hi) == 1:
                lo = mid
            else:
                hi = mid
                if evaluate(core, hi) == 0:
                    lo = hi
                    break
        out.append((lo, hi))
    out.sort()
    return out, core


def refine_root(core, lo, hi, width):
    """Bisect an isolating interval of a squarefree polynomial down to ``width``."""
    if lo == hi:
        return lo, hi
    flo = _sgn(evaluate(core, lo))
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = _sgn(evaluate(core, mid))
        if fm == 0:
            return mid, mid
        if fm == flo:
            lo = mid
        else:
            hi = mid
    return lo, hi
