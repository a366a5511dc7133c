"""Residue certificates and the descent prover.

A ``ResidueCertificate`` records, for one modulus m, which exponent classes
(x mod x_period, y mod y_period) can still give p**x - q**y a square residue
mod m. Moduli sharing a factor with p or q are handled with the eventual
period of the power sequence, so a certificate only speaks about exponents
at or beyond its regime threshold.

``prove_trivial_descent`` mechanizes the argument for pairs with
p = 3 (mod 4) and q = 1 (mod 4): x is even, the difference of squares
splits into powers of q, which forces 2*p**k = 1 + q**y, and a finite cycle
check mod q**2 rules that out for y >= 2.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .arith import eventual_period, factorize, multiplicative_order, power_residues, square_residue_set
from .primes import PrimePair

if TYPE_CHECKING:
    from .search import SolutionSet

TABLE_CAP = 10**4
COMPOSE_CAP = 10**6


@dataclass(frozen=True)
class ResidueCertificate:
    pair: PrimePair
    modulus: int
    x_preperiod: int
    x_period: int
    y_preperiod: int
    y_period: int
    allowed: frozenset[tuple[int, int]]

    @property
    def regime(self) -> tuple[int, int]:
        return (self.x_preperiod, self.y_preperiod)

    @property
    def table_size(self) -> int:
        return self.x_period * self.y_period

    @property
    def eliminated_fraction(self) -> float:
        return 1 - len(self.allowed) / self.table_size

    def in_regime(self, x: int, y: int) -> bool:
        return x >= self.x_preperiod and y >= self.y_preperiod

    def class_of(self, x: int, y: int) -> tuple[int, int]:
        return (x % self.x_period, y % self.y_period)

    def permits(self, x: int, y: int) -> bool:
        """False only when (x, y) is provably not a solution. Outside the regime nothing is claimed."""
        return not self.in_regime(x, y) or self.class_of(x, y) in self.allowed

    def allowed_x_classes(self) -> set[int]:
        return {a for a, _ in self.allowed}

    def allowed_y_classes(self) -> set[int]:
        return {b for _, b in self.allowed}


def _allowed_table(xs: list[int], ys: list[int], m: int) -> frozenset[tuple[int, int]]:
    squares = np.zeros(m, dtype=bool)
    squares[list(square_residue_set(m))] = True
    diff = (np.asarray(xs, dtype=np.int64)[:, None] - np.asarray(ys, dtype=np.int64)[None, :]) % m
    rows, cols = np.nonzero(squares[diff])
    return frozenset(zip(rows.tolist(), cols.tolist()))


def _periodic_part(residues: list[int], pre: int, period: int) -> list[int]:
    # Index by class c = x mod period using a representative x >= pre.
    return [residues[pre + (c - pre) % period] for c in range(period)]


def build_certificate(pair: PrimePair, m: int) -> ResidueCertificate:
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    xi, yi = eventual_period(pair.p, m), eventual_period(pair.q, m)
    xs = _periodic_part(power_residues(pair.p, m, xi), xi.preperiod, xi.period)
    ys = _periodic_part(power_residues(pair.q, m, yi), yi.preperiod, yi.period)
    return ResidueCertificate(
        pair=pair,
        modulus=m,
        x_preperiod=xi.preperiod,
        x_period=xi.period,
        y_preperiod=yi.preperiod,
        y_period=yi.period,
        allowed=_allowed_table(xs, ys, m),
    )


def all_allowed(pair: PrimePair) -> ResidueCertificate:
    """The certificate that excludes nothing (modulus 1); identity for composition."""
    return ResidueCertificate(pair, 1, 0, 1, 0, 1, frozenset({(0, 0)}))


def compose_certificates(certs: Iterable[ResidueCertificate], cap: int = COMPOSE_CAP) -> ResidueCertificate:
    """Intersect certificates after lifting them to common periods."""
    certs = list(certs)
    if not certs:
        raise ValueError("nothing to compose")
    pair = certs[0].pair
    if any(c.pair != pair for c in certs):
        raise ValueError("certificates refer to different pairs")
    if len(certs) == 1:
        return certs[0]
    xl = math.lcm(*(c.x_period for c in certs))
    yl = math.lcm(*(c.y_period for c in certs))
    if xl * yl > cap:
        raise ValueError(f"composed class table {xl}x{yl} exceeds cap {cap}")
    allowed = frozenset(
        (a, b)
        for a in range(xl)
        for b in range(yl)
        if all((a % c.x_period, b % c.y_period) in c.allowed for c in certs)
    )
    return ResidueCertificate(
        pair=pair,
        modulus=math.lcm(*(c.modulus for c in certs)),
        x_preperiod=max(c.x_preperiod for c in certs),
        x_period=xl,
        y_preperiod=max(c.y_preperiod for c in certs),
        y_period=yl,
        allowed=allowed,
    )


def check_soundness(cert: ResidueCertificate, sols: SolutionSet) -> bool:
    if cert.pair != sols.pair:
        raise ValueError("certificate and solution set refer to different pairs")
    return all(cert.permits(s.x, s.y) for s in sols.solutions)


def eliminates_odd_x(cert: ResidueCertificate) -> bool:
    return cert.x_period % 2 == 0 and all(a % 2 == 0 for a, _ in cert.allowed)


def eliminates_odd_y(cert: ResidueCertificate) -> bool:
    return cert.y_period % 2 == 0 and all(b % 2 == 0 for _, b in cert.allowed)


def eliminates_something(cert: ResidueCertificate) -> bool:
    return len(cert.allowed) < cert.table_size


GOALS: dict[str, Callable[[ResidueCertificate], bool]] = {
    "any": lambda cert: True,
    "eliminate-something": eliminates_something,
    "eliminate-odd-x": eliminates_odd_x,
    "eliminate-odd-y": eliminates_odd_y,
}


def search_modulus(
    pair: PrimePair,
    m_max: int,
    goal: Callable[[ResidueCertificate], bool] | None = None,
    table_cap: int = TABLE_CAP,
) -> list[ResidueCertificate]:
    """Certificates for m in [2, m_max] meeting ``goal``, best elimination first."""
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    found = []
    for m in range(2, m_max + 1):
        xi, yi = eventual_period(pair.p, m), eventual_period(pair.q, m)
        if xi.period * yi.period > table_cap:
            continue
        cert = build_certificate(pair, m)
        if goal is None or goal(cert):
            found.append(cert)
    found.sort(key=lambda c: (-c.eliminated_fraction, c.modulus))
    return found


# --- descent -----------------------------------------------------------------


@dataclass(frozen=True)
class ParityStep:
    """x odd makes p**x - q**y = 3 - 1 = 2 (mod 4), which is not a square."""

    p_mod4: int
    q_mod4: int
    odd_x_residue: int
    squares_mod4: tuple[int, ...]


@dataclass(frozen=True)
class FactorStep:
    """gcd(p**k - n, p**k + n) divides 2*p**k, and q shares nothing with 2*p.

    With x = 2k the factors multiply to q**y, so both are powers of q.
    """

    gcd_q_2: int
    gcd_q_p: int


@dataclass(frozen=True)
class ForcingStep:
    """Adding q**a + q**b = 2*p**k; q does not divide 2*p, so a = 0 and 2*p**k = 1 + q**y."""

    two_p_mod_q: int


@dataclass(frozen=True)
class CycleStep:
    """2*p**k mod q**2 never equals 1, which rules out y >= 2.

    ``residues`` lists 2*p**k mod q**2 for k = 1..order when it was stored.
    ``half_power`` is (1/2)**order mod q**2; it differs from 1 exactly when
    1/2 lies outside the cyclic subgroup generated by p, an independent
    route to the same conclusion.
    """

    modulus: int
    order: int
    half_power: int
    residues: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SmallCasesStep:
    """y = 1 needs 2*p**k = q + 1 but 2*p > q + 1; y = 0 needs p**k = 1."""

    two_p: int
    q_plus_one: int


@dataclass(frozen=True)
class DescentProof:
    pair: PrimePair
    parity: ParityStep
    factorization: FactorStep
    forcing: ForcingStep
    cycle: CycleStep
    small_cases: SmallCasesStep

    def steps(self) -> list[tuple[str, object]]:
        return [
            ("parity", self.parity),
            ("factorization", self.factorization),
            ("exponent_forcing", self.forcing),
            ("cycle_check", self.cycle),
            ("small_cases", self.small_cases),
        ]


@dataclass(frozen=True)
class Inconclusive:
    pair: PrimePair
    step: str
    reason: str


def _cycle_residues(p: int, m: int, order: int) -> tuple[int, ...]:
    out, value = [], 1
    for _ in range(order):
        value = value * p % m
        out.append(2 * value % m)
    return tuple(out)


def prove_trivial_descent(pair: PrimePair, residue_cap: int | None = None) -> DescentProof | Inconclusive:
    """Try to prove that only (x, y) = (0, 0) gives a square.

    ``residue_cap`` limits how long a cycle is stored verbatim in the proof;
    None stores it whatever its length. The verdict never depends on it.
    """
    p, q = pair.p, pair.q
    if p % 4 != 3 or q % 4 != 1:
        return Inconclusive(pair, "precondition", f"needs p = 3 and q = 1 (mod 4), got p = {p % 4}, q = {q % 4} (mod 4)")
    squares = tuple(sorted(square_residue_set(4)))
    parity = ParityStep(p % 4, q % 4, (p - q) % 4, squares)
    factor = FactorStep(math.gcd(q, 2), math.gcd(q, p))
    m = q * q
    order = multiplicative_order(p, m, factors={q: 2})
    half = (m + 1) // 2
    residues = _cycle_residues(p, m, order) if residue_cap is None or order <= residue_cap else None
    cycle = CycleStep(m, order, pow(half, order, m), residues)
    if cycle.half_power == 1:
        k = _first_k_hitting_one(p, m, order)
        return Inconclusive(pair, "cycle_check", f"2*{p}^{k} = 1 (mod {m}); y >= 2 is not excluded")
    return DescentProof(pair, parity, factor, ForcingStep(2 * p % q), cycle, SmallCasesStep(2 * p, q + 1))


def _first_k_hitting_one(p: int, m: int, order: int) -> int:
    value = 1
    for k in range(1, order + 1):
        value = value * p % m
        if 2 * value % m == 1:
            return k
    raise AssertionError("subgroup test and cycle walk disagree")


@dataclass
class ReplayResult:
    ok: bool
    failures: list[str] = field(default_factory=list)


def replay_descent(proof: DescentProof) -> ReplayResult:
    """Recompute every stored fact of a descent proof from scratch."""
    p, q = proof.pair.p, proof.pair.q
    fails = []
    par = proof.parity
    sq = square_residue_set(4)
    if (par.p_mod4, par.q_mod4) != (p % 4, q % 4) or (par.p_mod4, par.q_mod4) != (3, 1):
        fails.append("parity: residues mod 4 do not match p = 3, q = 1")
    if par.odd_x_residue != (pow(p, 1, 4) - pow(q, 1, 4)) % 4 or par.odd_x_residue in sq:
        fails.append("parity: odd x residue is a square mod 4")
    if tuple(sorted(sq)) != par.squares_mod4:
        fails.append("parity: stored squares mod 4 are wrong")
    fac = proof.factorization
    if fac.gcd_q_2 != math.gcd(q, 2) or fac.gcd_q_p != math.gcd(q, p) or (fac.gcd_q_2, fac.gcd_q_p) != (1, 1):
        fails.append("factorization: q is not coprime to 2p")
    if proof.forcing.two_p_mod_q != 2 * p % q or proof.forcing.two_p_mod_q == 0:
        fails.append("forcing: q divides 2p")
    cyc = proof.cycle
    m = q * q
    if cyc.modulus != m:
        fails.append("cycle: modulus is not q^2")
    if pow(p, cyc.order, m) != 1 or any(
        pow(p, cyc.order // r, m) == 1 for r in factorize(cyc.order)
    ):
        fails.append("cycle: stored order is not the multiplicative order of p")
    if cyc.half_power != pow((m + 1) // 2, cyc.order, m) or cyc.half_power == 1:
        fails.append("cycle: 1/2 lies in the subgroup generated by p")
    if cyc.residues is not None:
        if cyc.residues != _cycle_residues(p, m, cyc.order) or 1 in cyc.residues:
            fails.append("cycle: stored residues are wrong or contain 1")
    sm = proof.small_cases
    if sm.two_p != 2 * p or sm.q_plus_one != q + 1 or not sm.two_p > sm.q_plus_one or p <= 1:
        fails.append("small cases: 2p > q + 1 fails")
    return ReplayResult(not fails, fails)
