"""Primality, prime stepping and consecutive prime pairs."""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

DETERMINISTIC_LIMIT = 2**64
SIEVE_LIMIT = 10**9

# Strong-pseudoprime bases that are exact for every n < 3.3e24 (and so below 2**64).
_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_BASES = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; exact below 2**64, a strong probable-prime test above.

    Use ``is_deterministic`` to find out which regime applied.
    """
    if n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _BASES if n < DETERMINISTIC_LIMIT else _BASES + _EXTRA_BASES
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


def is_deterministic(n: int) -> bool:
    return n < DETERMINISTIC_LIMIT


def next_prime(n: int) -> int:
    if n < 2:
        return 2
    c = n + 1 if n % 2 == 0 else n + 2
    while not is_prime(c):
        c += 2
    return c


def prev_prime(n: int) -> int:
    if n < 3:
        raise ValueError(f"no prime below {n}")
    if n == 3:
        return 2
    c = n - 1 if n % 2 == 0 else n - 2
    while not is_prime(c):
        c -= 2
    return c


@dataclass(frozen=True, order=True)
class PrimePair:
    """Consecutive primes q < p, stored as (p, q) to match p**x - q**y."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError("p is not prime")
        if not is_prime(self.q):
            raise ValueError("q is not prime")
        if self.p <= self.q:
            raise ValueError("p must be greater than q")
        nxt = next_prime(self.q)
        if nxt != self.p:
            raise ValueError(f"p and q are not consecutive primes (next prime after {self.q} is {nxt})")

    @classmethod
    def trusted(cls, p: int, q: int) -> PrimePair:
        """Build without re-validating; callers must already know q, p are adjacent primes."""
        self = object.__new__(cls)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        return self

    @property
    def deterministic(self) -> bool:
        return is_deterministic(self.p)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def _small_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags)


def iter_primes(limit: int, start: int = 2, segment: int = 1 << 20) -> Iterator[int]:
    """Primes in [start, limit], ascending.

    A segmented sieve covers everything up to ``SIEVE_LIMIT``; beyond that the
    iterator steps with ``next_prime``.
    """
    start = max(start, 2)
    sieve_top = min(limit, SIEVE_LIMIT)
    if start <= sieve_top:
        base = _small_sieve(math.isqrt(sieve_top) + 1)
        low = start
        while low <= sieve_top:
            high = min(low + segment, sieve_top + 1)
            flags = np.ones(high - low, dtype=bool)
            for p in base:
                p = int(p)
                if p * p >= high:
                    break
                first = max(p * p, -(-low // p) * p)
                flags[first - low :: p] = False
            if low < 2:
                flags[: 2 - low] = False
            for off in np.flatnonzero(flags):
                yield low + int(off)
            low = high
    if limit > SIEVE_LIMIT:
        c = next_prime(max(start, SIEVE_LIMIT + 1) - 1)
        while c <= limit:
            yield c
            c = next_prime(c)


def iter_consecutive_pairs(limit: int, after: int = 0) -> Iterator[PrimePair]:
    """PrimePair(p, q) for every p <= limit with p > after, ascending by p."""
    if limit < 3:
        return
    q = prev_prime(after + 1) if after >= 3 else None
    start = after + 1 if after >= 3 else 2
    for p in iter_primes(limit, start):
        if q is not None:
            yield PrimePair.trusted(p, q)
        q = p


def consecutive_pairs(limit: int) -> list[PrimePair]:
    if limit < 3:
        raise ValueError(f"limit must be >= 3, got {limit}")
    return list(iter_consecutive_pairs(limit))
