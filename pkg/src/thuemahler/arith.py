"""Exact integer utilities: factorization, smoothness, k-free tests."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError

TRIAL_LIMIT = 10**6
# Miller-Rabin with these bases is deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=None)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    primes = np.flatnonzero(flags)
    primes.setflags(write=False)
    return primes


def primes_up_to(limit: int) -> np.ndarray:
    """Read-only array of primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    # round up so repeated calls with nearby limits share one sieve
    size = max(1024, 1 << (limit - 1).bit_length())
    primes = _sieve(size)
    return primes[: np.searchsorted(primes, limit, side="right")]


@lru_cache(maxsize=1)
def _small_prime_set() -> frozenset:
    return frozenset(int(p) for p in primes_up_to(1000))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n <= 1000:
        return n in _small_prime_set()
    for p in _MR_BASES:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_cofactor(n: int, out: dict, rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split_cofactor(r, out, rng)
        _split_cofactor(r, out, rng)
        return
    d = _brent(n, rng)
    _split_cofactor(d, out, rng)
    _split_cofactor(n // d, out, rng)


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def factorize(m: int) -> Factorization:
    """Exact prime factorization of a non-zero integer."""
    m = int(m)
    if m == 0:
        raise DomainError("factorize: m must be non-zero")
    sign = -1 if m < 0 else 1
    n = abs(m)
    out: dict[int, int] = {}
    limit = min(TRIAL_LIMIT, math.isqrt(n) + 1)
    for p in primes_up_to(limit):
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        if n < TRIAL_LIMIT * TRIAL_LIMIT:
            out[n] = out.get(n, 0) + 1
        else:
            # seeded so factorization is reproducible run to run
            _split_cofactor(n, out, random.Random(n))
    return Factorization(sign, tuple(sorted(out.items())))


def omega(m: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(m).factors)


def gpf(m: int) -> int:
    """Greatest prime factor, with gpf(+-1) = 1."""
    f = factorize(m)
    return f.factors[-1][0] if f.factors else 1


@dataclass(frozen=True)
class PrimeSet:
    """Sorted tuple of distinct primes P_1 < ... < P_t."""

    primes: tuple[int, ...] = ()

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        if any(not is_prime(p) for p in ps):
            raise DomainError(f"PrimeSet: non-prime entry in {ps}")
        if list(ps) != sorted(set(ps)):
            raise DomainError(f"PrimeSet: primes must be strictly increasing, got {ps}")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        return cls(tuple(sorted(set(int(p) for p in primes))))

    @property
    def t(self) -> int:
        return len(self.primes)

    @property
    def product(self) -> int:
        return math.prod(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)


def _as_primes(S) -> tuple[int, ...]:
    if isinstance(S, PrimeSet):
        return S.primes
    return PrimeSet.of(S).primes


def strip(m: int, S) -> tuple[int, list[int]]:
    """Remove every prime of S from |m|; return (cofactor, exponents)."""
    n = abs(int(m))
    if n == 0:
        raise DomainError("strip: m must be non-zero")
    exps = []
    for p in _as_primes(S):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps.append(e)
    return n, exps


def is_smooth(m: int, S) -> bool:
    """True iff |m| has no prime factor outside S."""
    if m == 0:
        raise DomainError("is_smooth: m must be non-zero")
    return strip(m, S)[0] == 1


def is_kfree(m: int, k: int) -> bool:
    if m == 0:
        raise DomainError("is_kfree: m must be non-zero")
    if k < 2:
        raise DomainError("is_kfree: k must be >= 2")
    return all(e < k for _, e in factorize(m).factors)


def kfree_table(limit: int, k: int) -> np.ndarray:
    """Boolean array T with T[i] true iff i is k-free (T[0] is False)."""
    table = np.ones(limit + 1, dtype=bool)
    table[0] = False
    for p in primes_up_to(int(round(limit ** (1.0 / k))) + 1):
        pk = int(p) ** k
        if pk > limit:
            break
        table[::pk] = False
    return table


def vp(m: int, p: int) -> int:
    """p-adic valuation of a non-zero integer."""
    if m == 0:
        raise DomainError("vp: zero has infinite valuation")
    m = abs(m)
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e
