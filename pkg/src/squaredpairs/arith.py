"""Exact nonnegative integer helpers used throughout the package.

Everything here works on plain Python ints, so there is no overflow; instead
inputs larger than a configurable bit cap are refused with ``MagnitudeError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_BIT_CAP = 4096


class MagnitudeError(ValueError):
    """An input exceeded the configured bit cap."""


def _check(n: int, bit_cap: int | None, name: str = "n") -> None:
    if n < 0:
        raise ValueError(f"{name} must be nonnegative, got {n}")
    if bit_cap is not None and n.bit_length() > bit_cap:
        raise MagnitudeError(f"{name} has {n.bit_length()} bits, cap is {bit_cap}")


def isqrt(n: int, *, bit_cap: int | None = DEFAULT_BIT_CAP) -> int:
    """Return the largest r with r*r <= n."""
    _check(n, bit_cap)
    return math.isqrt(n)


def _residue_table(m: int) -> bytes:
    table = bytearray(m)
    for t in range(m):
        table[t * t % m] = 1
    return bytes(table)


# Squares are rejected quickly by these moduli before any root is taken.
_FILTERS = tuple((m, _residue_table(m)) for m in (64, 63, 65, 11))


def is_perfect_square(n: int, *, bit_cap: int | None = DEFAULT_BIT_CAP) -> int | None:
    """Return the square root of n if n is a perfect square, else None.

    0 counts as a perfect square with root 0.
    """
    _check(n, bit_cap)
    for m, table in _FILTERS:
        if not table[n % m]:
            return None
    r = math.isqrt(n)
    return r if r * r == n else None


def pow_mod(a: int, e: int, m: int, *, bit_cap: int | None = DEFAULT_BIT_CAP) -> int:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    _check(a, bit_cap, "a")
    _check(e, bit_cap, "e")
    _check(m, bit_cap, "m")
    return pow(a, e, m)


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization. Only meant for the small moduli used here."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for d in (2, 3):
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
    d = 5
    while d * d <= n:
        for f in (d, d + 2):
            while n % f == 0:
                out[f] = out.get(f, 0) + 1
                n //= f
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _phi_factors(factors: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for r, e in factors.items():
        if e > 1:
            out[r] = out.get(r, 0) + e - 1
        if r > 2:
            for s, f in factorize(r - 1).items():
                out[s] = out.get(s, 0) + f
    return out


def multiplicative_order(a: int, m: int, *, factors: dict[int, int] | None = None) -> int:
    """Least t >= 1 with a**t == 1 (mod m).

    ``factors`` may supply the prime factorization of m when it is already
    known (e.g. m = q**2 for a known prime q), which avoids factoring m.
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if math.gcd(a, m) != 1:
        raise ValueError(f"gcd({a}, {m}) != 1, order undefined")
    if m == 1:
        return 1
    if factors is None:
        factors = factorize(m)
    elif math.prod(r**e for r, e in factors.items()) != m:
        raise ValueError(f"factorization {factors} does not multiply to {m}")
    phi_fac = _phi_factors(factors)
    t = math.prod(r**e for r, e in phi_fac.items())
    for r in phi_fac:
        while t % r == 0 and pow(a, t // r, m) == 1:
            t //= r
    return t


@lru_cache(maxsize=4096)
def square_residue_set(m: int) -> frozenset[int]:
    """All values t*t mod m, zero and non-unit squares included."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return frozenset(t * t % m for t in range(m))


@dataclass(frozen=True)
class PeriodInfo:
    preperiod: int
    period: int


def eventual_period(a: int, m: int) -> PeriodInfo:
    """Minimal (preperiod, period) of the sequence a**x mod m, x = 0, 1, ...

    Works for any modulus, including ones sharing a factor with ``a``; the
    sequence is walked until its first repeated value.
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if a < 1:
        raise ValueError(f"base must be >= 1, got {a}")
    seen: dict[int, int] = {}
    value, x = 1 % m, 0
    while value not in seen:
        seen[value] = x
        value = value * a % m
        x += 1
    first = seen[value]
    return PeriodInfo(preperiod=first, period=x - first)


def power_residues(a: int, m: int, info: PeriodInfo | None = None) -> list[int]:
    """a**x mod m for x in [0, preperiod + period)."""
    if info is None:
        info = eventual_period(a, m)
    out, value = [], 1 % m
    for _ in range(info.preperiod + info.period):
        out.append(value)
        value = value * a % m
    return out
