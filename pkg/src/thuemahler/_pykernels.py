"""Pure-Python (numpy) implementations of the lattice-scan kernels.

Same contract as the compiled ``_ckernels`` module; see :mod:`thuemahler.kernels`.
Floating point is only used to *propose* candidates; every pair that is
returned has been checked with exact integer arithmetic.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_I64_SAFE = 2**62


def _horner_f(coeffs_hi, u):
    """f(u) = F(u, 1) in float64, coeffs highest-first."""
    acc = np.zeros_like(u)
    for c in coeffs_hi:
        acc = acc * u + float(c)
    return acc


def _abs_horner(coeffs_hi, u):
    acc = np.zeros_like(u)
    au = np.abs(u)
    for c in coeffs_hi:
        acc = acc * au + abs(float(c))
    return acc


def _solve_monotone(coeffs_hi, lo, hi, target, increasing, tol):
    """Vectorised bisection: smallest u in [lo, hi] with f(u) >= target (increasing)
    or f(u) <= target (decreasing). Stops when the bracket is below tol."""
    lo = lo.copy()
    hi = hi.copy()
    width = hi - lo
    iters = int(np.ceil(np.log2(max(float(np.max(width / tol)), 2.0)))) + 1 if width.size else 0
    for _ in range(min(iters, 200)):
        mid = 0.5 * (lo + hi)
        fm = _horner_f(coeffs_hi, mid)
        ok = fm >= target if increasing else fm <= target
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    return lo, hi


def _candidate_ranges(coeffs, crit, Z, B, qs):
    """For each q (non-zero) propose integer p-ranges covering {|F(p,q)| <= Z}."""
    n = len(coeffs) - 1
    H = max(abs(c) for c in coeffs)
    absq = np.abs(qs).astype(np.float64)
    U = B / absq
    c = float(Z) / absq**n
    # inflate the target to absorb float evaluation error near the boundary
    c_eff = c * (1 + 1e-9)
    tol = 0.25 / absq
    breaks = [(-U)] + [np.clip(np.full_like(U, x), -U, U) for x in crit] + [U]
    lo_all, hi_all, q_all = [], [], []
    for left, right in zip(breaks[:-1], breaks[1:]):
        fl = _horner_f(coeffs, left)
        fr = _horner_f(coeffs, right)
        slack = 1e-12 * H * np.maximum(1.0, np.maximum(np.abs(left), np.abs(right))) ** n
        ce = c_eff + slack
        increasing = fr >= fl
        # increasing pieces
        lo = np.empty_like(left)
        hi = np.empty_like(left)
        for inc in (True, False):
            sel = (increasing == inc) & (right > left)
            if not sel.any():
                continue
            L, R = left[sel], right[sel]
            ces = ce[sel]
            if inc:
                a_lo, a_hi = _solve_monotone(coeffs, L, R, -ces, True, tol[sel])
                b_lo, b_hi = _solve_monotone(coeffs, L, R, ces, True, tol[sel])
                # lower end: first u with f >= -c; upper end: last u with f <= c
                lo[sel] = a_lo
                hi[sel] = b_hi
                empty = (_horner_f(coeffs, L) > ces) | (_horner_f(coeffs, R) < -ces)
            else:
                a_lo, a_hi = _solve_monotone(coeffs, L, R, ces, False, tol[sel])
                b_lo, b_hi = _solve_monotone(coeffs, L, R, -ces, False, tol[sel])
                lo[sel] = a_lo
                hi[sel] = b_hi
                empty = (_horner_f(coeffs, L) < -ces) | (_horner_f(coeffs, R) > ces)
            idx = np.flatnonzero(sel)
            lo[idx[empty]] = np.nan
        keep = ~np.isnan(lo) & (right > left)
        plo = np.where(qs > 0, lo * qs, hi * qs)[keep]
        phi = np.where(qs > 0, hi * qs, lo * qs)[keep]
        lo_all.append(np.maximum(np.floor(plo) - 1, -B))
        hi_all.append(np.minimum(np.ceil(phi) + 1, B))
        q_all.append(qs[keep])
    return np.concatenate(lo_all), np.concatenate(hi_all), np.concatenate(q_all)


def _exact_filter(coeffs, p, q, Z, signed_target=None):
    """Exact check of candidates; returns mask and exact values (object array)."""
    n = len(coeffs) - 1
    H = max(abs(c) for c in coeffs)
    pf, qf = p.astype(np.float64), q.astype(np.float64)
    # float pre-screen with a rigorous-enough error margin
    approx = np.zeros_like(pf)
    mag = np.zeros_like(pf)
    for i, c in enumerate(coeffs):
        term = float(c) * pf ** (n - i) * qf**i
        approx += term
        mag += np.abs(term)
    err = mag * (4 * (n + 2) * 2.0**-52) + 1.0
    sure_out = np.abs(approx) - err > Z
    check = np.flatnonzero(~sure_out)
    mask = np.zeros(p.shape, dtype=bool)
    vals = np.zeros(p.shape, dtype=np.int64)
    bound = H * (n + 1) * float(max(np.max(np.abs(pf), initial=0), np.max(np.abs(qf), initial=0))) ** n
    if bound < _I64_SAFE and check.size:
        pc, qc = p[check], q[check]
        acc = np.zeros(check.size, dtype=np.int64)
        qk = np.ones(check.size, dtype=np.int64)
        for c in coeffs:
            acc = acc * pc + c * qk
            qk = qk * qc
        ok = np.abs(acc) <= Z
        if signed_target is not None:
            ok &= acc == signed_target
        mask[check[ok]] = True
        vals[check[ok]] = acc[ok]
    else:
        for j in check:
            pp, qq = int(p[j]), int(q[j])
            acc, qk = 0, 1
            for c in coeffs:
                acc = acc * pp + c * qk
                qk *= qq
            if abs(acc) <= Z and (signed_target is None or acc == signed_target):
                mask[j] = True
                vals[j] = acc
    return mask, vals


def small_values(coeffs, crit, Z, B, q_lo, q_hi, target=None):
    """All (p, q) with |p| <= B, q_lo <= q <= q_hi and |F(p, q)| <= Z.

    If ``target`` is given only pairs with F(p, q) == target are kept.
    Returns int64 arrays (p, q, F(p, q)) sorted by (q, p).
    """
    coeffs = [int(c) for c in coeffs]
    crit = [float(x) for x in crit]
    n = len(coeffs) - 1
    ps, qs_out, vs = [], [], []
    chunk = 1 << 16
    for start in range(q_lo, q_hi + 1, chunk):
        stop = min(q_hi, start + chunk - 1)
        qs = np.arange(start, stop + 1, dtype=np.int64)
        if start <= 0 <= stop:
            qs = qs[qs != 0]
            # q = 0: F(p, 0) = a0 p^n
            a0 = coeffs[0]
            if a0 == 0:
                pr = np.arange(-B, B + 1, dtype=np.int64)
                v = np.zeros_like(pr)
            else:
                r = int(math.floor((Z / abs(a0)) ** (1.0 / n))) + 1
                r = min(r, B)
                pr = np.arange(-r, r + 1, dtype=np.int64)
                keep = [abs(a0 * int(x) ** n) <= Z for x in pr]
                pr = pr[np.array(keep, dtype=bool)]
                v = np.array([a0 * int(x) ** n for x in pr], dtype=np.int64)
            if target is not None:
                sel = v == target
                pr, v = pr[sel], v[sel]
            ps.append(pr)
            qs_out.append(np.zeros_like(pr))
            vs.append(v)
        if qs.size == 0:
            continue
        lo, hi, qq = _candidate_ranges(coeffs, crit, Z, B, qs)
        lo = lo.astype(np.int64)
        hi = hi.astype(np.int64)
        lens = np.maximum(hi - lo + 1, 0)
        total = int(lens.sum())
        if total == 0:
            continue
        rep_q = np.repeat(qq, lens)
        offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lens) - lens, lens)
        rep_p = np.repeat(lo, lens) + offs
        # drop duplicates coming from adjacent monotone pieces
        key = np.unique(np.stack([rep_q, rep_p], axis=1), axis=0)
        cq, cp = key[:, 0], key[:, 1]
        mask, vals = _exact_filter(coeffs, cp, cq, Z, target)
        ps.append(cp[mask])
        qs_out.append(cq[mask])
        vs.append(vals[mask])
    if not ps:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    p = np.concatenate(ps).astype(np.int64)
    q = np.concatenate(qs_out).astype(np.int64)
    v = np.concatenate(vs).astype(np.int64)
    order = np.lexsort((p, q))
    return p[order], q[order], v[order]


def sbox_scan(coeffs, primes, Z, B, q_lo, q_hi, coprime):
    """Pairs in the box |p| <= B, q_lo <= q <= q_hi with F(p, q) != 0 whose
    S-free part |F| / (S-part) is <= Z.

    ``coprime=True`` requires gcd(p, q) = 1; otherwise no prime of S may divide
    both p and q. Returns int64 arrays (p, q, reduced value) sorted by (q, p).
    """
    coeffs = [int(c) for c in coeffs]
    primes = [int(P) for P in primes]
    n = len(coeffs) - 1
    H = max(abs(c) for c in coeffs)
    use_int = H * (n + 1) * float(max(B, abs(q_lo), abs(q_hi))) ** n < _I64_SAFE
    p_axis = np.arange(-B, B + 1, dtype=np.int64)
    rows = max(1, (1 << 20) // max(1, p_axis.size))
    out_p, out_q, out_v = [], [], []
    for start in range(q_lo, q_hi + 1, rows):
        stop = min(q_hi, start + rows - 1)
        qv = np.arange(start, stop + 1, dtype=np.int64)
        P2, Q2 = np.meshgrid(p_axis, qv)
        P2, Q2 = P2.ravel(), Q2.ravel()
        if coprime:
            ok = np.gcd(P2, Q2) == 1
        else:
            ok = np.ones(P2.shape, dtype=bool)
            for P in primes:
                ok &= ~((P2 % P == 0) & (Q2 % P == 0))
        P2, Q2 = P2[ok], Q2[ok]
        if use_int:
            acc = np.zeros(P2.shape, dtype=np.int64)
            qk = np.ones(P2.shape, dtype=np.int64)
            for c in coeffs:
                acc = acc * P2 + c * qk
                qk = qk * Q2
            acc = np.abs(acc)
        else:
            acc = np.zeros(P2.shape, dtype=object)
            qk = np.ones(P2.shape, dtype=object)
            Po, Qo = P2.astype(object), Q2.astype(object)
            for c in coeffs:
                acc = acc * Po + c * qk
                qk = qk * Qo
            acc = np.abs(acc)
        nz = acc != 0
        P2, Q2, acc = P2[nz], Q2[nz], acc[nz]
        for P in primes:
            while True:
                div = acc % P == 0
                if not div.any():
                    break
                acc = np.where(div, acc // P, acc)
        keep = acc <= Z
        out_p.append(P2[keep])
        out_q.append(Q2[keep])
        out_v.append(np.asarray(acc[keep], dtype=np.int64))
    if not out_p:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    p = np.concatenate(out_p)
    q = np.concatenate(out_q)
    v = np.concatenate(out_v)
    order = np.lexsort((p, q))
    return p[order], q[order], v[order]


_TRIAL = 1000


def gpf_array(values):
    """Greatest prime factor of each |value| (gpf(1) = 1); values non-zero int64.

    Primes below 1000 are divided out in bulk; a cofactor below 10^6 is then 1
    or prime, and only larger cofactors are factored one by one.
    """
    from . import arith

    x = np.abs(np.asarray(values, dtype=np.int64))
    best = np.ones_like(x)
    for P in arith.primes_up_to(_TRIAL):
        P = int(P)
        idx = np.nonzero(x % P == 0)[0]
        if not idx.size:
            continue
        best[idx] = P
        while idx.size:
            x[idx] //= P
            idx = idx[x[idx] % P == 0]
    best = np.maximum(best, np.where(x < _TRIAL * _TRIAL, x, 1))
    for i in np.nonzero(x >= _TRIAL * _TRIAL)[0]:
        best[i] = arith.gpf(int(x[i]))
    return best
