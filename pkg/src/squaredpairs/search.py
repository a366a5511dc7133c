"""Bounded exhaustive search for p**x - q**y = n**2 and per-pair verdicts."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .arith import DEFAULT_BIT_CAP, is_perfect_square
from .certificate import DescentProof, Inconclusive, prove_trivial_descent, search_modulus
from .primes import PrimePair

DEFAULT_MAX_X = 64
DEFAULT_MAX_Y = 64


@dataclass(frozen=True, order=True)
class Solution:
    x: int
    y: int
    n: int

    def check(self, pair: PrimePair) -> bool:
        return pair.p**self.x - pair.q**self.y == self.n * self.n

    @property
    def trivial(self) -> bool:
        return self.x == 0 and self.y == 0


@dataclass(frozen=True)
class Bounds:
    max_x: int = DEFAULT_MAX_X
    max_y: int = DEFAULT_MAX_Y
    max_bits: int = DEFAULT_BIT_CAP

    def __post_init__(self) -> None:
        if min(self.max_x, self.max_y) < 0 or self.max_bits < 1:
            raise ValueError(f"invalid bounds {self}")


@dataclass(frozen=True)
class SolutionSet:
    pair: PrimePair
    bounds: Bounds
    solutions: tuple[Solution, ...]
    effective_max_x: int
    truncated: bool = False

    @property
    def witnesses(self) -> tuple[Solution, ...]:
        return tuple(s for s in self.solutions if not s.trivial)

    def exponents(self) -> set[tuple[int, int]]:
        return {(s.x, s.y) for s in self.solutions}


def solve_pair(pair: PrimePair, max_x: int = DEFAULT_MAX_X, max_y: int = DEFAULT_MAX_Y,
               max_bits: int = DEFAULT_BIT_CAP) -> SolutionSet:
    """Every (x, y) within bounds with p**x - q**y a perfect square.

    If p**max_x would exceed ``max_bits`` the x range is cut back to the
    largest admissible exponent and the result is marked truncated.
    """
    bounds = Bounds(max_x, max_y, max_bits)
    p, q = pair.p, pair.q
    sols = []
    px, x = 1, 0
    while x <= max_x and px.bit_length() <= max_bits:
        qy, y = 1, 0
        while y <= max_y and qy <= px:
            n = is_perfect_square(px - qy, bit_cap=None)
            if n is not None:
                sols.append(Solution(x, y, n))
            qy *= q
            y += 1
        px *= p
        x += 1
    eff = x - 1
    return SolutionSet(pair, bounds, tuple(sorted(sols)), eff, truncated=eff < max_x)


class Verdict(str, enum.Enum):
    PROVED_TRIVIAL = "proved_trivial"
    NONTRIVIAL = "nontrivial"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class CertificateNote:
    """Summary of a residue certificate consulted for an unresolved pair."""

    modulus: int
    x_period: int
    y_period: int
    regime: tuple[int, int]
    eliminated_fraction: float


@dataclass(frozen=True)
class ClassificationRecord:
    pair: PrimePair
    verdict: Verdict
    bounds: Bounds
    solution_count: int
    truncated: bool = False
    witnesses: tuple[Solution, ...] = ()
    proof: DescentProof | None = None
    inconclusive: Inconclusive | None = None
    certificates: tuple[CertificateNote, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.verdict is Verdict.NONTRIVIAL:
            if not self.witnesses or any(w.trivial for w in self.witnesses):
                raise ValueError(f"{self.pair}: nontrivial verdict needs nontrivial witnesses")
        elif self.witnesses:
            raise ValueError(f"{self.pair}: witnesses contradict verdict {self.verdict.value}")
        if (self.verdict is Verdict.PROVED_TRIVIAL) != (self.proof is not None):
            raise ValueError(f"{self.pair}: proved_trivial requires a descent proof and vice versa")


def classify_pair(pair: PrimePair, bounds: Bounds = Bounds(), m_max: int = 0,
                  residue_cap: int | None = None, top_certificates: int = 3) -> ClassificationRecord:
    """Search first; if nothing nontrivial turns up, try the descent prover.

    A pair is never declared trivial on the strength of an empty search.
    When the prover is inconclusive and ``m_max >= 2``, the best residue
    certificates up to ``m_max`` are attached as evidence.
    """
    sols = solve_pair(pair, bounds.max_x, bounds.max_y, bounds.max_bits)
    common = dict(pair=pair, bounds=bounds, solution_count=len(sols.solutions), truncated=sols.truncated)
    if sols.witnesses:
        return ClassificationRecord(verdict=Verdict.NONTRIVIAL, witnesses=sols.witnesses, **common)
    outcome = prove_trivial_descent(pair, residue_cap=residue_cap)
    if isinstance(outcome, DescentProof):
        return ClassificationRecord(verdict=Verdict.PROVED_TRIVIAL, proof=outcome, **common)
    notes: tuple[CertificateNote, ...] = ()
    if m_max >= 2:
        certs = search_modulus(pair, m_max)[:top_certificates]
        notes = tuple(
            CertificateNote(c.modulus, c.x_period, c.y_period, c.regime, round(c.eliminated_fraction, 12))
            for c in certs
        )
    return ClassificationRecord(verdict=Verdict.UNRESOLVED, inconclusive=outcome, certificates=notes, **common)
