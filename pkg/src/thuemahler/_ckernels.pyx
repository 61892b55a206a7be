# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled lattice-scan kernels (same contract as ``_pykernels``).

Exactness: candidates come from double precision root brackets; every
accepted pair is checked with 128-bit integer arithmetic. Callers guarantee
that H * (n+1) * max(B, |q|)^n < 2^126 and that Z < 2^62.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor, ceil, fabs, pow as cpow
from libcpp.vector cimport vector

cnp.import_array()

BACKEND = "cython"

cdef extern from *:
    """
    typedef __int128 i128;
    """
    ctypedef long long i128


cdef inline i128 eval_exact(const long long* c, int n, long long p, long long q) noexcept nogil:
    cdef i128 acc = 0
    cdef i128 qk = 1
    cdef int i
    for i in range(n + 1):
        acc = acc * <i128>p + <i128>c[i] * qk
        qk = qk * <i128>q
    return acc


cdef inline double eval_f(const double* c, int n, double u) noexcept nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(n + 1):
        acc = acc * u + c[i]
    return acc


cdef inline i128 iabs(i128 x) noexcept nogil:
    return -x if x < 0 else x


cdef double solve_first(const double* c, int n, double lo, double hi,
                        double target, bint increasing, double tol) noexcept nogil:
    # smallest u in [lo, hi] with f(u) >= target (increasing) / f(u) <= target
    # (decreasing); returns the upper end of the final bracket
    cdef double mid, fm
    cdef int it
    for it in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = eval_f(c, n, mid)
        if (fm >= target) if increasing else (fm <= target):
            hi = mid
        else:
            lo = mid
    return hi


cdef double solve_first_lo(const double* c, int n, double lo, double hi,
                           double target, bint increasing, double tol) noexcept nogil:
    cdef double mid, fm
    cdef int it
    for it in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = eval_f(c, n, mid)
        if (fm >= target) if increasing else (fm <= target):
            hi = mid
        else:
            lo = mid
    return lo


cdef void scan_q(const long long* ci, const double* cf, int n, double H,
                 const double* crit, int ncrit, long long Z, long long B,
                 long long q, bint has_target, long long target,
                 vector[long long]& outp, vector[long long]& outq,
                 vector[long long]& outv) noexcept nogil:
    cdef double aq = fabs(<double>q)
    cdef double U = <double>B / aq
    cdef double cc = (<double>Z / cpow(aq, n)) * (1.0 + 1e-9)
    cdef double tol = 0.25 / aq
    cdef double left, right, fl, fr, slack, ce, ulo, uhi, plo, phi, m
    cdef long long lo_i, hi_i, p, nlo, nhi
    cdef int k, j, cnt = 0
    cdef bint inc
    cdef long long rlo[64]
    cdef long long rhi[64]
    cdef long long tl, th
    cdef i128 v
    cdef int npieces = ncrit + 1
    for k in range(npieces):
        left = -U if k == 0 else crit[k - 1]
        right = U if k == ncrit else crit[k]
        if left < -U:
            left = -U
        if right > U:
            right = U
        if not (right > left):
            continue
        fl = eval_f(cf, n, left)
        fr = eval_f(cf, n, right)
        m = fabs(left) if fabs(left) > fabs(right) else fabs(right)
        if m < 1.0:
            m = 1.0
        slack = 1e-12 * H * cpow(m, n)
        ce = cc + slack
        inc = fr >= fl
        if inc:
            if fl > ce or fr < -ce:
                continue
            ulo = solve_first_lo(cf, n, left, right, -ce, True, tol)
            uhi = solve_first(cf, n, left, right, ce, True, tol)
        else:
            if fl < -ce or fr > ce:
                continue
            ulo = solve_first_lo(cf, n, left, right, ce, False, tol)
            uhi = solve_first(cf, n, left, right, -ce, False, tol)
        if q > 0:
            plo = ulo * <double>q
            phi = uhi * <double>q
        else:
            plo = uhi * <double>q
            phi = ulo * <double>q
        plo = floor(plo) - 1.0
        phi = ceil(phi) + 1.0
        if plo < <double>(-B):
            plo = <double>(-B)
        if phi > <double>B:
            phi = <double>B
        if phi < plo:
            continue
        rlo[cnt] = <long long>plo
        rhi[cnt] = <long long>phi
        cnt += 1
    # sort ranges by lower end (cnt <= n) and merge
    for k in range(1, cnt):
        j = k
        while j > 0 and rlo[j - 1] > rlo[j]:
            tl = rlo[j]; rlo[j] = rlo[j - 1]; rlo[j - 1] = tl
            th = rhi[j]; rhi[j] = rhi[j - 1]; rhi[j - 1] = th
            j -= 1
    k = 0
    while k < cnt:
        nlo = rlo[k]
        nhi = rhi[k]
        j = k + 1
        while j < cnt and rlo[j] <= nhi + 1:
            if rhi[j] > nhi:
                nhi = rhi[j]
            j += 1
        p = nlo
        while p <= nhi:
            v = eval_exact(ci, n, p, q)
            if iabs(v) <= <i128>Z and ((not has_target) or v == <i128>target):
                outp.push_back(p)
                outq.push_back(q)
                outv.push_back(<long long>v)
            p += 1
        k = j


def small_values(coeffs, crit, long long Z, long long B, long long q_lo,
                 long long q_hi, target=None):
    cdef int n = len(coeffs) - 1
    if n + 1 > 64:
        raise ValueError("degree too large for compiled kernel")
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ci = np.asarray([int(c) for c in coeffs], dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cf = np.asarray([float(c) for c in coeffs], dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cr = np.ascontiguousarray(sorted(float(x) for x in crit), dtype=np.float64)
    cdef int ncrit = cr.shape[0]
    cdef double H = float(max(abs(int(c)) for c in coeffs))
    cdef bint has_target = target is not None
    cdef long long tgt = int(target) if target is not None else 0
    cdef vector[long long] outp, outq, outv
    cdef long long q, p, r
    cdef i128 v
    cdef long long a0 = ci[0]
    cdef const long long* cip = <const long long*> ci.data
    cdef const double* cfp = <const double*> cf.data
    cdef const double* crp = <const double*> cr.data if ncrit > 0 else NULL
    with nogil:
        q = q_lo
        while q <= q_hi:
            if q == 0:
                if a0 == 0:
                    r = B
                else:
                    r = <long long>cpow(<double>Z / fabs(<double>a0), 1.0 / n) + 2
                    if r > B:
                        r = B
                p = -r
                while p <= r:
                    v = eval_exact(cip, n, p, 0)
                    if iabs(v) <= <i128>Z and ((not has_target) or v == <i128>tgt):
                        outp.push_back(p)
                        outq.push_back(0)
                        outv.push_back(<long long>v)
                    p += 1
            else:
                scan_q(cip, cfp, n, H, crp, ncrit, Z, B, q, has_target, tgt,
                       outp, outq, outv)
            q += 1
    cdef Py_ssize_t m = outp.size()
    P = np.empty(m, dtype=np.int64)
    Q = np.empty(m, dtype=np.int64)
    V = np.empty(m, dtype=np.int64)
    cdef long long[:] Pv = P
    cdef long long[:] Qv = Q
    cdef long long[:] Vv = V
    cdef Py_ssize_t i
    for i in range(m):
        Pv[i] = outp[i]
        Qv[i] = outq[i]
        Vv[i] = outv[i]
    return P, Q, V


cdef inline long long llgcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


def sbox_scan(coeffs, primes, long long Z, long long B, long long q_lo,
              long long q_hi, bint coprime):
    cdef int n = len(coeffs) - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ci = np.asarray([int(c) for c in coeffs], dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] pr = np.asarray([int(P) for P in primes] or [0], dtype=np.int64)
    cdef int t = len(primes)
    cdef const long long* cip = <const long long*> ci.data
    cdef const long long* prp = <const long long*> pr.data
    cdef vector[long long] outp, outq, outv
    cdef long long q, p, P
    cdef int j
    cdef bint ok
    cdef i128 v
    with nogil:
        q = q_lo
        while q <= q_hi:
            p = -B
            while p <= B:
                if coprime:
                    ok = llgcd(p, q) == 1
                else:
                    ok = True
                    for j in range(t):
                        P = prp[j]
                        if p % P == 0 and q % P == 0:
                            ok = False
                            break
                if ok:
                    v = iabs(eval_exact(cip, n, p, q))
                    if v != 0:
                        for j in range(t):
                            P = prp[j]
                            while v % P == 0:
                                v = v / P
                        if v <= <i128>Z:
                            outp.push_back(p)
                            outq.push_back(q)
                            outv.push_back(<long long>v)
                p += 1
            q += 1
    cdef Py_ssize_t m = outp.size()
    Pa = np.empty(m, dtype=np.int64)
    Qa = np.empty(m, dtype=np.int64)
    Va = np.empty(m, dtype=np.int64)
    cdef long long[:] Pv = Pa
    cdef long long[:] Qv = Qa
    cdef long long[:] Vv = Va
    cdef Py_ssize_t i
    for i in range(m):
        Pv[i] = outp[i]
        Qv[i] = outq[i]
        Vv[i] = outv[i]
    return Pa, Qa, Va


# ---------------------------------------------------------------- gpf

cdef extern from *:
    """
    typedef unsigned long long u64;
    typedef unsigned __int128 u128;

    static inline u64 tm_mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

    static u64 tm_powmod(u64 a, u64 e, u64 m) {
        u64 r = 1 % m;
        a %= m;
        while (e) {
            if (e & 1) r = tm_mulmod(r, a, m);
            a = tm_mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    }

    /* Miller-Rabin with the first 12 prime bases: exact below 3.3e24 */
    static int tm_is_prime(u64 n) {
        static const u64 bases[12] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        if (n < 2) return 0;
        for (int i = 0; i < 12; i++) {
            if (n % bases[i] == 0) return n == bases[i];
        }
        u64 d = n - 1;
        int s = 0;
        while (!(d & 1)) { d >>= 1; s++; }
        for (int i = 0; i < 12; i++) {
            u64 x = tm_powmod(bases[i], d, n);
            if (x == 1 || x == n - 1) continue;
            int comp = 1;
            for (int r = 1; r < s; r++) {
                x = tm_mulmod(x, x, n);
                if (x == n - 1) { comp = 0; break; }
            }
            if (comp) return 0;
        }
        return 1;
    }

    static u64 tm_gcd(u64 a, u64 b) {
        while (b) { u64 t = a % b; a = b; b = t; }
        return a;
    }

    /* Brent's cycle finding; n odd composite */
    static u64 tm_rho(u64 n) {
        for (u64 c = 1;; c++) {
            u64 y = 2, x, ys = 2, q = 1, g = 1, r = 1, m = 128;
            do {
                x = y;
                for (u64 i = 0; i < r; i++) y = (tm_mulmod(y, y, n) + c) % n;
                u64 k = 0;
                do {
                    ys = y;
                    u64 lim = (m < r - k) ? m : r - k;
                    for (u64 i = 0; i < lim; i++) {
                        y = (tm_mulmod(y, y, n) + c) % n;
                        q = tm_mulmod(q, x > y ? x - y : y - x, n);
                    }
                    g = tm_gcd(q, n);
                    k += m;
                } while (k < r && g == 1);
                r <<= 1;
            } while (g == 1);
            if (g == n) {
                do {
                    ys = (tm_mulmod(ys, ys, n) + c) % n;
                    g = tm_gcd(x > ys ? x - ys : ys - x, n);
                } while (g == 1);
            }
            if (g != n) return g;
        }
    }

    static u64 tm_gpf_rec(u64 n) {
        if (n == 1) return 1;
        if (tm_is_prime(n)) return n;
        u64 d = tm_rho(n);
        u64 a = tm_gpf_rec(d), b = tm_gpf_rec(n / d);
        return a > b ? a : b;
    }

    static u64 tm_gpf(u64 n) {
        u64 best = 1;
        for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
            if (n % p == 0) {
                best = p;
                while (n % p == 0) n /= p;
            }
        }
        if (n > 1) {
            u64 g = tm_gpf_rec(n);
            if (g > best) best = g;
        }
        return best;
    }
    """
    unsigned long long tm_gpf(unsigned long long n) nogil


def gpf_array(long long[::1] values):
    """Greatest prime factor of |v| for each non-zero int64 v (gpf(1) = 1)."""
    cdef Py_ssize_t i, m = values.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef long long[::1] o = out
    cdef unsigned long long a
    with nogil:
        for i in range(m):
            a = <unsigned long long>(values[i]) if values[i] >= 0 else <unsigned long long>(-(values[i] + 1)) + 1
            o[i] = <long long>tm_gpf(a)
    return out
