"""Backend selection and block-parallel drivers for the lattice kernels.

The compiled module ``_ckernels`` is used when it imports and the
``THUEMAHLER_PURE`` environment variable is not set to 1; otherwise the
numpy implementation in ``_pykernels`` is used. Both return identical arrays.

Work is split into fixed-size q-blocks whose results are concatenated in block
order, so output never depends on the number of threads.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import _pykernels, polys

try:
    if os.environ.get("THUEMAHLER_PURE", "0") == "1":
        raise ImportError("pure backend requested")
    from . import _ckernels as _native
except ImportError:  # pragma: no cover - depends on the build
    _native = None

Q_BLOCK = 8192
_I128_SAFE = 2**125
_I64_SAFE = 2**62


def backend() -> str:
    return _native.BACKEND if _native is not None else _pykernels.BACKEND


def _impl(name: str):
    if name == "python":
        return _pykernels
    if name == "cython":
        if _native is None:
            raise ImportError("compiled kernels are not available")
        return _native
    return _native if _native is not None else _pykernels


def critical_points(coeffs_hi) -> list[float]:
    """Real roots of f' for f(u) = F(u, 1), as floats (sorted)."""
    f = polys.trim(list(reversed([int(c) for c in coeffs_hi])))
    df = polys.derivative(f)
    if polys.deg(df) < 1:
        return []
    intervals, core = polys.isolate_real_roots(df)
    pts = []
    for lo, hi in intervals:
        if lo != hi:
            scale = max(abs(lo), abs(hi), Fraction(1))
            lo, hi = polys.refine_root(core, lo, hi, scale * Fraction(1, 2**60))
        pts.append(float((lo + hi) / 2))
    return sorted(pts)


def _blocks(q_lo, q_hi, size=Q_BLOCK):
    start = q_lo
    while start <= q_hi:
        stop = min(q_hi, start + size - 1)
        yield start, stop
        start = stop + 1


def _run_blocks(fn, q_lo, q_hi, threads):
    blocks = list(_blocks(q_lo, q_hi))
    if threads and threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda b: fn(*b), blocks))
    else:
        parts = [fn(*b) for b in blocks]
    if not parts:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))


def small_values(coeffs_hi, Z: int, B: int, q_lo: int, q_hi: int, target=None,
                 threads: int = 1, crit=None, impl: str = "auto"):
    """All (p, q) in [-B, B] x [q_lo, q_hi] with |F(p, q)| <= Z (or F = target).

    Returns int64 arrays (p, q, F(p, q)) ordered by (q, p).
    """
    coeffs = [int(c) for c in coeffs_hi]
    n = len(coeffs) - 1
    if crit is None:
        crit = critical_points(coeffs)
    H = max(abs(c) for c in coeffs)
    Bmax = max(B, abs(q_lo), abs(q_hi), 1)
    if Z >= _I64_SAFE or (target is not None and abs(target) > Z):
        raise ValueError("Z out of range for the lattice kernels")
    mod = _impl(impl)
    if mod is _native and (H * (n + 1) * Bmax**n >= _I128_SAFE or n > 63
                           or H >= _I64_SAFE):
        mod = _pykernels

    def run(a, b):
        return mod.small_values(coeffs, crit, int(Z), int(B), a, b, target)

    return _run_blocks(run, q_lo, q_hi, threads)


def sbox_scan(coeffs_hi, primes, Z: int, B: int, q_lo: int, q_hi: int,
              coprime: bool, threads: int = 1, impl: str = "auto"):
    """Pairs in the box whose S-free part of |F(p, q)| is <= Z (F != 0)."""
    coeffs = [int(c) for c in coeffs_hi]
    n = len(coeffs) - 1
    H = max(abs(c) for c in coeffs)
    Bmax = max(B, abs(q_lo), abs(q_hi), 1)
    mod = _impl(impl)
    if mod is _native and (H * (n + 1) * Bmax**n >= _I128_SAFE or Z >= _I64_SAFE):
        mod = _pykernels
    primes = [int(P) for P in primes]

    def run(a, b):
        return mod.sbox_scan(coeffs, primes, int(Z), int(B), a, b, bool(coprime))

    return _run_blocks(run, q_lo, q_hi, threads)


def gpf_array(values, impl: str = "auto") -> np.ndarray:
    """Greatest prime factor of |v| for each non-zero int64 v."""
    v = np.ascontiguousarray(values, dtype=np.int64)
    if v.size and not np.all(v):
        raise ValueError("gpf_array: zero value")
    return _impl(impl).gpf_array(v)
