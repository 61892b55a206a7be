"""Area of {(x, y) : |F(x, y)| <= 1} for a binary form of degree n >= 3.

Splitting the plane into |x| <= |y| and |x| > |y| and substituting x = u y
(resp. y = w x) gives, with alpha = 2/n,

    area = int_{-1}^{1} |F(u, 1)|^-alpha du + int_{-1}^{1} |F(1, w)|^-alpha dw,

two proper one-dimensional integrals whose only singularities are the
integrable ones at real roots. No truncation of the unbounded cusps is needed.

Quadrature: around each real root theta a cell [c1, c2] is integrated in
closed form using |f(u)| = |f'(xi)| |u - theta| (mean value theorem); the
rest is covered by an adaptive midpoint rule whose error is bounded by an
interval enclosure of g''. Everything uses outward-rounded intervals, so
the returned radius is rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from fractions import Fraction

import numpy as np

from . import polys
from .interval import Interval, horner


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    radius: float
    method: str  # "quadrature" or "monte-carlo"
    seed: int | None = None
    converged: bool = True
    cells: int = 0

    @property
    def lo(self):
        return self.value - self.radius

    @property
    def hi(self):
        return self.value + self.radius

    def to_json(self):
        return asdict(self)


def _phi(y: Interval, beta: float) -> Interval:
    """sign(y) |y|^beta (increasing in y), 0 < beta < 1."""

    def f(v, up):
        if v == 0:
            return 0.0
        r = math.pow(abs(v), beta)
        r = r * (1 + 4e-16) if (v > 0) == up else r * (1 - 4e-16)
        return math.copysign(r, v)

    return Interval(f(y.lo, False), f(y.hi, True))


class _Chart:
    def __init__(self, coeffs_low, alpha):
        self.f = [int(c) for c in coeffs_low]
        self.d1 = polys.derivative(self.f)
        self.d2 = polys.derivative(self.d1)
        self.alpha = alpha

    def g_point(self, x: float) -> Interval:
        fx = horner(self.f, Interval.point(x)).abs()
        return fx.rpow(-self.alpha)

    def g2_bound(self, I: Interval) -> float:
        fI = horner(self.f, I)
        if fI.contains_zero():
            return math.inf
        s = 1.0 if fI.lo > 0 else -1.0
        af = fI.abs()
        a = self.alpha
        d1 = horner(self.d1, I) if self.d1 else Interval.point(0.0)
        d2 = horner(self.d2, I) if self.d2 else Interval.point(0.0)
        t1 = af.rpow(-a - 2) * d1.sqr() * (a * (a + 1))
        t2 = af.rpow(-a - 1) * (d2 * s) * a
        g2 = t1 - t2
        return max(abs(g2.lo), abs(g2.hi))


def _root_cells(chart: _Chart, roots, delta: float):
    """Closed-form enclosures on cells around the roots (clipped to [-1, 1])."""
    a = chart.alpha
    beta = 1 - a
    cells, encl = [], []
    for th in roots:
        c1 = max(-1.0, _down(th.lo - delta))
        c2 = min(1.0, _up(th.hi + delta))
        if c1 >= c2:
            continue
        H = Interval(min(c1, th.lo), max(c2, th.hi))
        D = horner(chart.d1, H)
        if D.contains_zero():
            return None
        D = D.abs()
        K = (_phi(Interval(c2, c2) - th, beta) - _phi(Interval(c1, c1) - th, beta)) * (1 / beta)
        K = Interval(max(K.lo, 0.0), K.hi)
        val = K * Interval(D.hi, D.hi).rpow(-a).hull(Interval(D.lo, D.lo).rpow(-a))
        cells.append((c1, c2))
        encl.append(val)
    return cells, encl


def _down(x):
    return math.nextafter(x, -math.inf)


def _up(x):
    return math.nextafter(x, math.inf)


def _merge(cells):
    cells = sorted(cells)
    out = []
    for c in cells:
        if out and c[0] <= out[-1][1]:
            return None  # overlapping cells: caller shrinks delta
        out.append(c)
    return out


def _chart_roots(coeffs_low):
    """Enclosures of real roots within distance 0.5 of [-1, 1]."""
    if polys.deg(coeffs_low) < 1:
        return []
    intervals, core = polys.isolate_real_roots(coeffs_low)
    out = []
    for lo, hi in intervals:
        if hi < -Fraction(3, 2) or lo > Fraction(3, 2):
            continue
        lo, hi = polys.refine_root(core, lo, hi, Fraction(1, 2**70))
        out.append(Interval(_down(float(lo)), _up(float(hi))))
    return out


def _integrate_chart(coeffs_low, alpha, tol, max_cells):
    chart = _Chart(coeffs_low, alpha)
    roots = _chart_roots(chart.f)
    # cells around the roots: shrink delta until their enclosures are tight
    delta = 1e-2
    while True:
        rc = _root_cells(chart, roots, delta)
        if rc is not None:
            cells, encl = rc
            merged = _merge(cells)
            if merged is not None and sum(e.width for e in encl) <= tol / 4:
                break
        delta /= 4
        if delta < 1e-14:
            cells, encl = rc if rc is not None else ([], [])
            break
    # gaps between root cells
    gaps = []
    cur = -1.0
    for c1, c2 in sorted(cells):
        if c1 > cur:
            gaps.append((cur, c1))
        cur = max(cur, c2)
    if cur < 1.0:
        gaps.append((cur, 1.0))
    total_len = sum(b - a for a, b in gaps) or 1.0
    density = (tol / 2) / total_len
    los, his = [e.lo for e in encl], [e.hi for e in encl]
    ncells = 0
    converged = True
    stack = [(a, b) for a, b in reversed(gaps) if b > a]
    while stack:
        a, b = stack.pop()
        w = b - a
        m = 0.5 * (a + b)
        ncells += 1
        M2 = chart.g2_bound(Interval(a, b))
        gm = chart.g_point(m)
        err = _up(w * w * w / 24.0 * M2) if math.isfinite(M2) else math.inf
        if (err <= density * w and math.isfinite(gm.hi)) or ncells > max_cells or w < 1e-15:
            if not math.isfinite(err) or err > density * w:
                converged = False
                if not math.isfinite(err):
                    err = math.inf
            wI = Interval(w, w) if (b - a) == w else Interval(_down(w), _up(w))
            val = wI * gm
            los.append(_down(val.lo - err))
            his.append(_up(val.hi + err))
            continue
        stack.append((m, b))
        stack.append((a, m))
    lo = _down(math.fsum(los))
    hi = _up(math.fsum(his))
    return Interval(lo, hi), ncells, converged


def sigma_quadrature(coeffs_hi, tol=1e-6, max_cells=2_000_000) -> AreaEstimate:
    """Rigorous enclosure of the area; coefficients highest X-power first."""
    cs = [int(c) for c in coeffs_hi]
    n = len(cs) - 1
    alpha = 2.0 / n
    fu = polys.trim(list(reversed(cs)))  # F(u, 1)
    fw = polys.trim(list(cs))  # F(1, w)
    I1, n1, ok1 = _integrate_chart(fu, alpha, tol / 2, max_cells // 2)
    I2, n2, ok2 = _integrate_chart(fw, alpha, tol / 2, max_cells // 2)
    tot = I1 + I2
    return AreaEstimate(tot.mid, _up(tot.width / 2), "quadrature", None,
                        ok1 and ok2 and math.isfinite(tot.hi), n1 + n2)


def area_below(coeffs_hi, T, tol=1e-4) -> AreaEstimate:
    """Area of {|F| <= T}, integrating |F/T|^{-2/n} directly."""
    cs = [int(c) for c in coeffs_hi]
    n = len(cs) - 1
    T = Fraction(T)
    # |F/T| <= 1  <=>  |T.den * F| <= T.num; scale coefficients to integers
    scaled = [c * T.denominator for c in cs]
    est = sigma_quadrature(scaled, tol=tol / max(1.0, float(T) ** (2 / n)))
    # area{|G| <= 1} for G = F * T.den is area{|F| <= 1/T.den}; rescale by T.num
    s = float(T.numerator) ** (2.0 / n)
    return AreaEstimate(est.value * s, est.radius * s * (1 + 1e-15), est.method, None,
                        est.converged, est.cells)


# ------------------------------------------------------------------ Monte Carlo

def _mc_chart(coeffs_low, alpha, samples, seed, chart_id):
    f = np.asarray([float(c) for c in coeffs_low])
    poly = np.polynomial.Polynomial(f)
    rts = [r.real for r in poly.roots() if abs(r.imag) < 1e-9 and -1 < r.real < 1]
    br = sorted(set([-1.0, 1.0] + rts))
    beta = 1.0 / (1.0 - alpha)
    est, var = 0.0, 0.0
    pieces = []
    for a, b in zip(br[:-1], br[1:]):
        m = 0.5 * (a + b)
        pieces += [(a, m), (b, m)]  # (endpoint, other end): substitution anchored at the endpoint
    per = max(1000, samples // max(1, len(pieces)))
    for idx, (e, c) in enumerate(pieces):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chart_id, idx])))
        L = abs(c - e)
        T = L ** (1.0 / beta)
        t = rng.random(per) * T
        u = e + math.copysign(1.0, c - e) * t**beta
        vals = np.abs(poly(u)) ** (-alpha) * beta * t ** (beta - 1) * T
        est += float(vals.mean())
        var += float(vals.var(ddof=1)) / per
    return est, var


def sigma_montecarlo(coeffs_hi, samples=400_000, seed=0) -> AreaEstimate:
    """Monte Carlo estimate; radius is the 99% normal confidence half-width."""
    cs = [int(c) for c in coeffs_hi]
    n = len(cs) - 1
    alpha = 2.0 / n
    e1, v1 = _mc_chart(list(reversed(cs)), alpha, samples // 2, seed, 0)
    e2, v2 = _mc_chart(list(cs), alpha, samples // 2, seed, 1)
    return AreaEstimate(e1 + e2, 2.5758293035489004 * math.sqrt(v1 + v2), "monte-carlo", seed)
