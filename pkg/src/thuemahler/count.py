"""Lattice-point counts for binary forms and their asymptotic constants.

Scan box: pairs with max(|p|, |q|) <= margin * B0 where B0 is the least
integer with B0^{n-2} >= 4Z. Pairs found between B0 and the margin box are
reported separately; nothing is claimed outside the box.

Counts use the symmetry (p, q) -> (-p, -q): only q >= 0 is scanned.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction

import numpy as np

from . import arith, kernels, padic, polys
from .area import AreaEstimate, area_below, sigma_montecarlo, sigma_quadrature
from .errors import DomainError, InvalidDegreeError, UnsupportedInstanceError
from .forms import BinaryForm, coerce, discriminant, is_irreducible, linear_factors

# ---------------------------------------------------------------- validation


def _check_countable(F: BinaryForm):
    if F.degree < 3:
        raise InvalidDegreeError("counting needs degree >= 3")
    if discriminant(F) == 0:
        raise UnsupportedInstanceError("form has a repeated factor (zero discriminant)")
    if linear_factors(F):
        raise UnsupportedInstanceError(
            "form has a rational linear factor, so F = 0 on a whole line and the count is infinite")


def box_radius(n: int, Z: int) -> int:
    """Least integer B0 >= 1 with B0^{n-2} >= 4Z."""
    if Z <= 0:
        return 1
    b = max(1, int(round((4 * Z) ** (1.0 / (n - 2)))))
    while b ** (n - 2) < 4 * Z:
        b += 1
    while b > 1 and (b - 1) ** (n - 2) >= 4 * Z:
        b -= 1
    return b


def _primes_of(S) -> tuple:
    if S is None:
        return ()
    if isinstance(S, arith.PrimeSet):
        return S.primes
    return arith.PrimeSet.of(S).primes


@dataclass(frozen=True)
class CountResult:
    count: int
    Z: int
    box: int  # scanned height bound
    core_box: int  # the large-solution threshold B0
    margin_count: int  # pairs with B0 < height <= box
    complete: bool = False  # True only if a certified bound covers the box

    def __int__(self):
        return self.count

    def to_json(self):
        return asdict(self)


def _scan_small(F: BinaryForm, Z: int, B: int, threads: int):
    p, q, v = kernels.small_values(F.coeffs, Z, B, 0, B, threads=threads)
    return p, q, v


def _weights(q):
    # (p, q) with q > 0 stands for itself and (-p, -q)
    return np.where(q > 0, 2, 1)


def _margin(p, q, B0):
    return np.maximum(np.abs(p), np.abs(q)) > B0


# ---------------------------------------------------------------- counts


def count_A(F, S=(), Z: int = 1, margin: int = 2, threads: int = 1, report: bool = False):
    """A_F(Z) (S empty) or A_{F,S}(Z)."""
    F = coerce(F)
    _check_countable(F)
    Z = int(Z)
    if Z < 0:
        raise DomainError("count_A: Z must be >= 0")
    primes = _primes_of(S)
    B0 = box_radius(F.degree, Z)
    B = margin * B0
    if not primes:
        p, q, v = _scan_small(F, Z, B, threads)
    else:
        p, q, v = kernels.sbox_scan(F.coeffs, primes, Z, B, 0, B, coprime=False, threads=threads)
    w = _weights(q)
    total = int(w.sum())
    extra = int(w[_margin(p, q, B0)].sum())
    res = CountResult(total, Z, B, B0, extra)
    return res if report else res.count


def _values(F: BinaryForm, Z: int, margin: int, threads: int):
    B0 = box_radius(F.degree, Z)
    B = margin * B0
    p, q, v = _scan_small(F, Z, B, threads)
    vals = v[v != 0]
    if F.degree % 2 == 1:
        vals = np.concatenate([vals, -vals])
    return np.unique(vals), B, B0, (p, q, v)


def count_R(F, Z: int, margin: int = 2, threads: int = 1, report: bool = False):
    """Number of non-zero h with |h| <= Z and F(p, q) = h solvable in the box."""
    F = coerce(F)
    _check_countable(F)
    vals, B, B0, (p, q, v) = _values(F, int(Z), margin, threads)
    inner = v[(v != 0) & ~_margin(p, q, B0)]
    if F.degree % 2:
        inner = np.concatenate([inner, -inner])
    inner = np.unique(inner)
    res = CountResult(int(vals.size), int(Z), B, B0, int(vals.size - inner.size))
    return res if report else res.count


def value_set(F, Z: int, margin: int = 2, threads: int = 1) -> np.ndarray:
    F = coerce(F)
    _check_countable(F)
    return _values(F, int(Z), margin, threads)[0]


def count_Rk(F, k: int, Z: int, margin: int = 2, threads: int = 1) -> int:
    F = coerce(F)
    _check_countable(F)
    if k < 2:
        raise DomainError("count_Rk: k must be >= 2")
    vals = _values(F, int(Z), margin, threads)[0]
    table = arith.kfree_table(int(Z), k)
    return int(table[np.abs(vals)].sum())


def fixed_prime_divisors(F, k: int) -> list[int]:
    """Primes P with P^k | F(a, b) for all integers a, b.

    Such P must divide F at every point of P^1(F_P), so either P <= n - 1 or P
    divides the content; only those candidates are tested.
    """
    F = coerce(F)
    cont = math.gcd(*F.coeffs)
    cands = set(int(P) for P in arith.primes_up_to(F.degree))
    if abs(cont) > 1:
        cands |= set(arith.factorize(cont).primes())
    return sorted(P for P in cands if padic.rho(F, P**k) == P ** (2 * k))


def _require_no_fixed_divisor(F, k):
    bad = fixed_prime_divisors(F, k)
    if bad:
        raise UnsupportedInstanceError(f"P^{k} divides every value of F for P in {bad}")


def count_Nk(F, k: int, Z: int, margin: int = 2, threads: int = 1, report: bool = False):
    """Pairs with 1 <= |F(p, q)| <= Z and F(p, q) k-free."""
    F = coerce(F)
    _check_countable(F)
    if k < 2:
        raise DomainError("count_Nk: k must be >= 2")
    _require_no_fixed_divisor(F, k)
    Z = int(Z)
    B0 = box_radius(F.degree, Z)
    B = margin * B0
    p, q, v = _scan_small(F, Z, B, threads)
    table = arith.kfree_table(Z, k)
    ok = (v != 0) & table[np.abs(v)]
    w = _weights(q)
    total = int(w[ok].sum())
    extra = int(w[ok & _margin(p, q, B0)].sum())
    res = CountResult(total, Z, B, B0, extra)
    return res if report else res.count


# ---------------------------------------------------------------- constants


def sigma_archimedean(F, tol: float = 1e-4, method: str = "quadrature", seed: int = 0,
                      samples: int = 400_000) -> AreaEstimate:
    F = coerce(F)
    if F.degree < 3:
        raise InvalidDegreeError("sigma: degree must be >= 3")
    if discriminant(F) == 0:
        raise UnsupportedInstanceError("sigma: zero discriminant")
    if method == "quadrature":
        return sigma_quadrature(F.coeffs, tol=tol)
    if method in ("mc", "monte-carlo"):
        return sigma_montecarlo(F.coeffs, samples=samples, seed=seed)
    raise DomainError(f"unknown sigma method {method!r}")


def bean_bound(F) -> float:
    """16 |D(F)|^{-1/(n(n-1))}."""
    F = coerce(F)
    n = F.degree
    return 16.0 * abs(discriminant(F)) ** (-1.0 / (n * (n - 1)))


def sigma_S(F, S=(), J: int = 8, tol: float = 1e-4) -> AreaEstimate:
    """sigma_F times the local factors s_P for P in S; radius covers all tails."""
    F = coerce(F)
    arch = sigma_archimedean(F, tol)
    lo, hi = arch.lo, arch.hi
    converged = arch.converged
    for P in _primes_of(S):
        lf = padic.local_factor(F, P, J)
        a, b = lf.interval()
        lo *= a
        hi *= b
        converged = converged and lf.tail_bound is not None
    if not math.isfinite(hi):
        return AreaEstimate(lo, math.inf, "quadrature", None, False, arch.cells)
    lo = math.nextafter(lo, -math.inf)
    hi = math.nextafter(hi, math.inf)
    return AreaEstimate((lo + hi) / 2, (hi - lo) / 2, "quadrature", None, converged, arch.cells)


@dataclass(frozen=True)
class LambdaResult:
    value: float  # partial product over P <= Pmax (and primes dividing D)
    tail: float | None  # lambda in [value * exp(-tail), value]; None if unvalidated
    k: int
    Pmax: int
    factors: dict = field(repr=False)  # exact factors for P <= 100

    @property
    def lo(self):
        return self.value * math.exp(-self.tail) if self.tail is not None else 0.0

    @property
    def hi(self):
        return self.value

    def to_json(self):
        return {"value": self.value, "tail": self.tail, "k": self.k, "Pmax": self.Pmax,
                "lo": self.lo, "hi": self.hi,
                "factors": {str(P): str(f) for P, f in self.factors.items()}}


def lambda_factor(F, P: int, k: int) -> Fraction:
    return 1 - Fraction(padic.rho(F, P**k), P ** (2 * k))


def lambda_k(F, k: int, Pmax: int = 10_000) -> LambdaResult:
    """Partial Euler product of 1 - rho_F(P^k)/P^{2k} with a tail bound.

    For P not dividing D(F), every root of F mod P is simple, so at most n
    residues mod P^e lift, and splitting pairs by min(v(i), v(j)) gives
    rho_F(P^k)/P^{2k} <= (2n+1)/(P^2-1). Summing over P > Pmax,
    log(1/tail product) <= c/(Pmax (1 - c/(Pmax^2-1))) with c = 2n+1. The
    inequality is checked against exact rho for all P <= 100 before use.
    """
    F = coerce(F)
    n = F.degree
    if k < 2:
        raise DomainError("lambda_k: k must be >= 2")
    _require_no_fixed_divisor(F, k)
    D = discriminant(F)
    cont = math.gcd(*F.coeffs)
    special = set()
    for m in (D, cont):
        if m not in (0, 1, -1):
            special |= set(arith.factorize(m).primes())
    primes = [int(P) for P in arith.primes_up_to(Pmax)]
    primes += sorted(P for P in special if P > Pmax)
    logs = []
    factors = {}
    c = 2 * n + 1
    validated = True
    for P in primes:
        r = padic.rho(F, P**k)
        x = Fraction(r, P ** (2 * k))
        if x >= 1:
            raise UnsupportedInstanceError(f"factor at P={P} is not positive")
        if P <= 100:
            factors[P] = 1 - x
            if P not in special and x > Fraction(c, P * P - 1):
                validated = False
        logs.append(math.log1p(-float(x)))
    value = math.exp(math.fsum(logs))
    tail = None
    if validated and c < Pmax * Pmax - 1:
        tail = (c / Pmax) / (1 - c / (Pmax * Pmax - 1))
        tail = tail * (1 + 1e-12)
    return LambdaResult(value, tail, k, Pmax, factors)


# ---------------------------------------------------------------- asymptotics


def t0_places(F, S=()) -> list:
    """Places of S (with the real place) where F(X, 1) has a zero."""
    F = coerce(F)
    f = F.dehomogenize()
    out = []
    if polys.deg(f) >= 1 and polys.isolate_real_roots(f)[0]:
        out.append("inf")
    for P in _primes_of(S):
        if padic.has_root_in_QP(f, P):
            out.append(P)
    return out


@dataclass
class CountSeries:
    form: list
    S: list
    k: int | None
    Zs: list
    counts: list
    normalized: list  # count / Z^{2/n} as [lo, hi] float pairs
    reference: float
    reference_radius: float
    residuals: list  # count - reference * Z^{2/n}
    t0: int
    error_exponent: float
    log_power: int
    boxes: list = field(default_factory=list)
    margin_counts: list = field(default_factory=list)

    def to_json(self):
        d = asdict(self)
        d["form"] = [str(c) for c in self.form]
        return d

    @classmethod
    def from_json(cls, d):
        d = dict(d)
        d["form"] = [int(c) for c in d["form"]]
        return cls(**d)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["Z", "count", "ratio_lo", "ratio_hi", "reference", "residual", "box", "margin_count"])
        for i, Z in enumerate(self.Zs):
            w.writerow([Z, self.counts[i], repr(self.normalized[i][0]), repr(self.normalized[i][1]),
                        repr(self.reference), repr(self.residuals[i]), self.boxes[i],
                        self.margin_counts[i]])
        return buf.getvalue()


def _ratio(count, Z, n):
    s = Z ** (2.0 / n)
    return [math.nextafter(count / s, -math.inf), math.nextafter(count / s, math.inf)]


def asymptotic_report(F, S=(), Zs=(10**3, 10**4, 10**5), k=None, J: int = 8, tol: float = 1e-4,
                      Pmax: int = 10_000, margin: int = 2, threads: int = 1,
                      counts: dict | None = None) -> CountSeries:
    """Counts on a Z grid with ratios to Z^{2/n} and the predicted constant.

    ``counts`` may carry already known {Z: CountResult-like dict} entries (cache reuse).
    """
    F = coerce(F)
    n = F.degree
    Zs = [int(z) for z in Zs]
    if any(b <= a for a, b in zip(Zs, Zs[1:])) or not Zs or Zs[0] < 1:
        raise DomainError("Z grid must be positive and strictly increasing")
    primes = list(_primes_of(S))
    if k is not None and primes:
        raise DomainError("the k-free series is defined for S empty only")
    if k is None:
        ref = sigma_S(F, primes, J=J, tol=tol)
        reference, rad = ref.value, ref.radius
    else:
        sig = sigma_archimedean(F, tol)
        lam = lambda_k(F, k, Pmax)
        lo = sig.lo * lam.lo
        hi = sig.hi * lam.hi
        reference, rad = (lo + hi) / 2, (hi - lo) / 2
    places = t0_places(F, primes)
    t0 = len(places)
    expo = 1.0 / n if t0 == 0 else 1.0 / (n - 1)
    logp = max(t0 - 1, 0)
    cs, norm, res, boxes, margins = [], [], [], [], []
    known = counts or {}
    for Z in Zs:
        if Z in known:
            r = known[Z]
        else:
            if k is None:
                r = count_A(F, primes, Z, margin=margin, threads=threads, report=True).to_json()
            else:
                r = count_Nk(F, k, Z, margin=margin, threads=threads, report=True).to_json()
        cs.append(r["count"])
        boxes.append(r["box"])
        margins.append(r["margin_count"])
        norm.append(_ratio(r["count"], Z, n))
        res.append(r["count"] - reference * Z ** (2.0 / n))
    return CountSeries(list(F.coeffs), primes, k, Zs, cs, norm, reference, rad, res, t0, expo,
                       logp, boxes, margins)


# ---------------------------------------------------------------- experiments


def richest_targets(F, M: int, top: int = 10, margin: int = 2, threads: int = 1):
    """Values 0 < |m| <= M with the most representations F(p, q) = m in the box."""
    F = coerce(F)
    if F.degree != 3:
        raise InvalidDegreeError("richest_targets: cubic forms only")
    _check_countable(F)
    B = margin * box_radius(3, M)
    p, q, v = _scan_small(F, M, B, threads)
    # add the mirrored pairs (-p, -q) with value -v for q > 0
    sel = q > 0
    allv = np.concatenate([v, -v[sel]])
    allv = allv[allv != 0]
    vals, cnt = np.unique(allv, return_counts=True)
    order = np.lexsort((vals, np.abs(vals), -cnt))[:top]
    out = []
    for i in order:
        m, c = int(vals[i]), int(cnt[i])
        lm = math.log(abs(m)) if abs(m) > 1 else 0.0
        out.append({"m": m, "count": c, "box": B,
                    "log_quarter": lm**0.25, "log_third": lm ** (1 / 3), "log_half": lm**0.5})
    return out


def representations(F, m: int, B: int):
    """All (p, q) in the box with F(p, q) = m (both signs of q)."""
    F = coerce(F)
    p, q, v = kernels.small_values(F.coeffs, abs(m), B, -B, B, target=m)
    return list(zip(p.tolist(), q.tolist()))


def _ilog(x, i):
    for _ in range(i):
        if x <= 0:
            return None
        x = math.log(x)
    return x


def _shell_values(F: BinaryForm, p: np.ndarray, q: np.ndarray, hi: int):
    n = F.degree
    if max(abs(c) for c in F.coeffs) * (n + 1) * hi**n < 2**62:
        acc = np.zeros_like(p)
        qq = np.ones_like(q)
        # F(p, q) = sum a_i p^{n-i} q^i, Horner in p with running q powers
        for c in F.coeffs:
            acc = acc * p + c * qq
            qq = qq * q
        return acc
    return np.array([F(int(a), int(b)) for a, b in zip(p, q)], dtype=object)


def gpf_scan(F, B: int):
    """Per dyadic shell 2^i <= |p,q| < 2^{i+1} (coprime, F != 0): min and max gpf.

    One pair of each +-pair is scanned; the shape columns are log_2(h)^{1/4} and
    log_2 h log_3 h / log_4 h at the top of the shell (log_i = i-fold log), or
    None where the iterated logs are not positive.
    """
    F = coerce(F)
    if F.degree < 3:
        raise InvalidDegreeError("gpf_scan: degree must be >= 3")
    if not is_irreducible(F):
        raise UnsupportedInstanceError("gpf_scan: form must be irreducible")
    out = []
    i = 0
    while 2**i <= B:
        lo, hi = 2**i, min(2 ** (i + 1) - 1, B)
        Pp, Q = np.meshgrid(np.arange(-hi, hi + 1, dtype=np.int64), np.arange(0, hi + 1, dtype=np.int64))
        Pp, Q = Pp.ravel(), Q.ravel()
        h = np.maximum(np.abs(Pp), Q)
        sel = (h >= lo) & (np.gcd(Pp, Q) == 1) & ((Q > 0) | (Pp > 0))
        Pp, Q = Pp[sel], Q[sel]
        vals = _shell_values(F, Pp, Q, hi)
        nz = vals != 0
        Pp, Q, vals = Pp[nz], Q[nz], vals[nz]
        if vals.size:
            if vals.dtype == object:
                g = np.array([arith.gpf(int(x)) for x in vals], dtype=np.int64)
            else:
                g = kernels.gpf_array(vals)
            j, jm = int(np.argmin(g)), int(np.argmax(g))
            L2, L3, L4 = (_ilog(float(hi), r) for r in (2, 3, 4))
            out.append({
                "shell": i, "lo": lo, "hi": hi, "pairs": int(vals.size),
                "min_gpf": int(g[j]), "argmin": [int(Pp[j]), int(Q[j])], "value_at_min": str(vals[j]),
                "max_gpf": int(g[jm]), "argmax": [int(Pp[jm]), int(Q[jm])],
                "shape_quarter": L2**0.25 if L2 is not None and L2 > 0 else None,
                "shape_iterated": (L2 * L3 / L4) if (L4 is not None and L4 > 0 and L3 > 0) else None,
            })
        i += 1
    return out


def series_json(series: CountSeries) -> str:
    return json.dumps(series.to_json(), sort_keys=True)
