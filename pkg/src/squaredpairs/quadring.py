"""Arithmetic in imaginary quadratic rings Z[sqrt(d)], d < 0 squarefree.

Z[i] is d = -1 and Z[sqrt(-2)] is d = -2. Elements keep their ``d`` and never
mix with elements of another ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb


class RingMismatchError(ValueError):
    """Two elements from different rings were combined."""


def _squarefree(n: int) -> bool:
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class QuadInt:
    """a + b*sqrt(d)."""

    a: int
    b: int
    d: int = -1

    def __post_init__(self) -> None:
        if self.d >= 0 or not _squarefree(self.d):
            raise ValueError(f"d must be a negative squarefree integer, got {self.d}")

    @classmethod
    def one(cls, d: int) -> QuadInt:
        return cls(1, 0, d)

    def _same_ring(self, other: QuadInt) -> None:
        if self.d != other.d:
            raise RingMismatchError(f"cannot combine elements of Z[sqrt({self.d})] and Z[sqrt({other.d})]")

    def __add__(self, other: QuadInt) -> QuadInt:
        if not isinstance(other, QuadInt):
            return NotImplemented
        self._same_ring(other)
        return QuadInt(self.a + other.a, self.b + other.b, self.d)

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.a, -self.b, self.d)

    def __sub__(self, other: QuadInt) -> QuadInt:
        if not isinstance(other, QuadInt):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: QuadInt) -> QuadInt:
        if not isinstance(other, QuadInt):
            return NotImplemented
        self._same_ring(other)
        return QuadInt(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    def __pow__(self, e: int) -> QuadInt:
        return qpow(self, e)

    def conj(self) -> QuadInt:
        return QuadInt(self.a, -self.b, self.d)

    def norm(self) -> int:
        return self.a * self.a - self.d * self.b * self.b

    def __str__(self) -> str:
        unit = "i" if self.d == -1 else f"√{self.d}"
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}{unit}"


def qadd(u: QuadInt, v: QuadInt) -> QuadInt:
    return u + v


def qmul(u: QuadInt, v: QuadInt) -> QuadInt:
    return u * v


def qnorm(u: QuadInt) -> int:
    return u.norm()


def qpow(u: QuadInt, e: int) -> QuadInt:
    if e < 0:
        raise ValueError("negative exponents are not supported")
    result, base = QuadInt.one(u.d), u
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def f_series(x: int, variant: str) -> int:
    """Binomial sums over odd k <= x.

    Variant "A": sum C(x,k) (-1)^((k+1)/2) 2^((k-1)/2), the sqrt(-2)
    coefficient of (1 - sqrt(-2))**x.
    Variant "B": sum C(x,k) (-1)^((k+1)/2) 2^(x-k), the i coefficient of
    (2 - i)**x.
    Only odd x is accepted.
    """
    if x < 1 or x % 2 == 0:
        raise ValueError(f"f_series is defined on odd x >= 1, got {x}")
    if variant == "A":
        weight = lambda k: 2 ** ((k - 1) // 2)  # noqa: E731
    elif variant == "B":
        weight = lambda k: 2 ** (x - k)  # noqa: E731
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return sum(comb(x, k) * (-1) ** ((k + 1) // 2) * weight(k) for k in range(1, x + 1, 2))


def imag_coeff(u: QuadInt, e: int) -> int:
    return qpow(u, e).b


def solve_imag_equals(base: QuadInt, target: int, xmax: int) -> set[int]:
    """All 0 <= x <= xmax with imag_coeff(base, x) == target.

    Plain scan; the imaginary part of base**x oscillates in sign, so no
    monotone cutoff is assumed.
    """
    if xmax < 1:
        raise ValueError(f"xmax must be >= 1, got {xmax}")
    hits = set()
    power = QuadInt.one(base.d)
    for x in range(xmax + 1):
        if power.b == target:
            hits.add(x)
        power = power * base
    return hits
