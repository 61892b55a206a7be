"""Binary forms with integer coefficients.

A form ``F(X, Y) = a0 X^n + a1 X^{n-1} Y + ... + an Y^n`` is stored by its
coefficient tuple ``(a0, ..., an)``, highest power of X first. The
dehomogenization ``f(X) = F(X, 1)`` is available as a low-first coefficient
list for the polynomial routines in :mod:`thuemahler.polys`.

Discriminant convention: for ``a0 != 0``,
``D(F) = (-1)^{n(n-1)/2} Res(f, f') / a0``, which for monic cubics is the
usual cubic discriminant; when ``a0 == 0`` the form is first moved by a
unimodular shift (the discriminant is an SL2(Z) invariant). Every use in
the counting and bound code goes through ``|D(F)|``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from . import polys
from .errors import DomainError, InvalidDegreeError, InvalidMapError


@dataclass(frozen=True)
class BinaryForm:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if len(cs) < 2:
            raise InvalidDegreeError("a binary form needs degree >= 1 (at least two coefficients)")
        if not any(cs):
            raise DomainError("the zero form is not allowed")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, *coeffs) -> "BinaryForm":
        if len(coeffs) == 1 and not isinstance(coeffs[0], int):
            coeffs = tuple(coeffs[0])
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, p, q):
        return evaluate(self, p, q)

    def dehomogenize(self):
        """f(X) = F(X, 1), low-first."""
        return polys.trim(list(reversed(self.coeffs)))

    def dehomogenize_y(self):
        """F(1, Y), low-first."""
        return polys.trim(list(self.coeffs))

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coeffs])

    @classmethod
    def from_json(cls, text) -> "BinaryForm":
        data = json.loads(text) if isinstance(text, str) else text
        if not isinstance(data, list):
            raise DomainError("form must be a JSON array of coefficients")
        try:
            return cls(tuple(int(c) for c in data))
        except (TypeError, ValueError) as exc:
            raise DomainError(f"bad coefficient in form: {exc}") from None

    def __str__(self):
        n = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "*".join(
                s for s in (f"X^{n - i}" if n - i > 1 else ("X" if n - i == 1 else ""),
                            f"Y^{i}" if i > 1 else ("Y" if i == 1 else "")) if s
            )
            terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class UnimodularMap:
    """(X, Y) -> (aX + bY, cX + dY) with ad - bc = +-1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise InvalidMapError(f"map is not unimodular (det = {self.det})")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def apply(self, p, q):
        return self.a * p + self.b * q, self.c * p + self.d * q

    def inverse(self) -> "UnimodularMap":
        e = self.det
        return UnimodularMap(self.d * e, -self.b * e, -self.c * e, self.a * e)

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)


def evaluate(F: BinaryForm, p, q):
    """Exact value a0 p^n + a1 p^{n-1} q + ... + an q^n (Horner in two variables)."""
    acc = 0
    qk = 1
    # acc accumulates sum a_i p^{n-i} q^i via Horner on p with q powers
    for c in F.coeffs:
        acc = acc * p + c * qk
        qk *= q
    return acc


def height(F: BinaryForm) -> int:
    return max(abs(c) for c in F.coeffs)


def apply_map(F: BinaryForm, M: UnimodularMap) -> BinaryForm:
    """G(X, Y) = F(aX + bY, cX + dY)."""
    if not isinstance(M, UnimodularMap):
        M = UnimodularMap(*M)
    n = F.degree
    # polynomials in t = X/Y (low-first); X -> a t + b, Y -> c t + d
    lx, ly = polys.trim([M.b, M.a]), polys.trim([M.d, M.c])
    out = [0] * (n + 1)
    for i, coef in enumerate(F.coeffs):
        if coef == 0:
            continue
        term = polys.mul(polys.power(lx, n - i), polys.power(ly, i))
        for j, v in enumerate(term):
            out[j] += coef * v
    return BinaryForm(tuple(reversed(out)))


def discriminant(F: BinaryForm) -> int:
    n = F.degree
    if n < 2:
        raise InvalidDegreeError("discriminant needs degree >= 2")
    G = F
    if F.coeffs[0] == 0:
        shift = next(c for c in range(n + 1) if evaluate(F, 1, c) != 0)
        G = apply_map(F, UnimodularMap(1, 0, shift, 1))
    f = G.dehomogenize()
    return polys.discriminant(f)


def is_squarefree(F: BinaryForm) -> bool:
    if F.degree == 1:
        return True
    return discriminant(F) != 0


def _homogenize(g, d) -> BinaryForm:
    """Univariate g (low-first) of degree <= d -> form Y^d g(X/Y)."""
    cs = list(g) + [0] * (d + 1 - len(g))
    return BinaryForm(tuple(reversed(cs)))


def factor_over_Q(F: BinaryForm):
    """Content and irreducible factorization over Q.

    Returns ``(content, [(factor, multiplicity), ...])`` with primitive integer
    factors whose first non-zero coefficient is positive, and
    ``content * prod(factor ** multiplicity) == F``.
    """
    cs = F.coeffs
    e = 0
    while cs[e] == 0:
        e += 1
    f = F.dehomogenize()
    cont, fac = polys.factor_z(f)
    out = []
    if e:
        out.append((BinaryForm((0, 1)), e))
    for g, mult in fac:
        out.append((_homogenize(g, polys.deg(g)), mult))
    # normalise signs: first non-zero coefficient positive
    sign = 1
    fixed = []
    for G, mult in out:
        lead = next(c for c in G.coeffs if c)
        if lead < 0:
            G = BinaryForm(tuple(-c for c in G.coeffs))
            sign *= (-1) ** mult
        fixed.append((G, mult))
    return sign * cont, fixed


def form_product(factors, content: int = 1) -> BinaryForm:
    """content * prod(G^e) as a BinaryForm."""
    acc = [content]  # low-first in t = X/Y, tracked with total degree
    total = 0
    for G, e in factors:
        for _ in range(e):
            acc = polys.mul(acc, list(reversed(G.coeffs)))
            total += G.degree
    return _homogenize(acc, total)


def is_irreducible(F: BinaryForm) -> bool:
    cont, fac = factor_over_Q(F)
    return len(fac) == 1 and fac[0][1] == 1 and fac[0][0].degree == F.degree


def linear_factors(F: BinaryForm):
    """Rational linear factors (as BinaryForms of degree 1)."""
    return [G for G, _ in factor_over_Q(F)[1] if G.degree == 1]


def normalize_nonvanishing(F: BinaryForm):
    """Smallest (u, v) in lexicographic order with F(1,u) F(v, uv+1) != 0.

    Returns ``(G, u, v)`` where ``G(X, Y) = F(X + vY, uX + (uv+1)Y)``; then
    ``G(1,0) = F(1,u)`` and ``G(0,1) = F(v, uv+1)`` are both non-zero.
    """
    n = F.degree
    for u in range(n):
        if evaluate(F, 1, u) == 0:
            continue
        for v in range(n):
            if evaluate(F, v, u * v + 1) != 0:
                M = UnimodularMap(1, v, u, u * v + 1)
                return apply_map(F, M), u, v
    # a non-zero form of degree n has at most n projective zeros, so this is unreachable
    raise AssertionError("no admissible (u, v) found")  # pragma: no cover


def normalizing_map(u: int, v: int) -> UnimodularMap:
    return UnimodularMap(1, v, u, u * v + 1)


def parse_form(text_or_seq) -> BinaryForm:
    """Accept a JSON array (strings or ints) or a Python sequence."""
    if isinstance(text_or_seq, BinaryForm):
        return text_or_seq
    if isinstance(text_or_seq, str):
        return BinaryForm.from_json(text_or_seq)
    return BinaryForm(tuple(int(c) for c in text_or_seq))


def require_degree(F: BinaryForm, lo: int, what: str):
    if F.degree < lo:
        raise InvalidDegreeError(f"{what}: degree must be >= {lo}, got {F.degree}")


def coerce(F) -> BinaryForm:
    if isinstance(F, BinaryForm):
        return F
    if isinstance(F, (str, Sequence)):
        return parse_form(F)
    raise DomainError(f"cannot interpret {F!r} as a binary form")
