"""Replay of the three small-pair propositions, errata checks and conjecture scans."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice

from .arith import square_residue_set
from .certificate import DescentProof, build_certificate, check_soundness, eliminates_odd_x, prove_trivial_descent, replay_descent
from .primes import PrimePair, iter_consecutive_pairs
from .quadring import QuadInt, f_series, qmul, solve_imag_equals
from .search import Bounds, ClassificationRecord, Solution, Verdict, classify_pair, solve_pair

log = logging.getLogger(__name__)

DEFAULT_RING_XMAX = 2000
CHECKPOINT_EVERY = 1000
SCAN_RESIDUE_CAP = 4096


@dataclass(frozen=True)
class StepCheck:
    description: str
    passed: bool


@dataclass(frozen=True)
class Erratum:
    claim: str
    location: str
    counterexample: dict


@dataclass(frozen=True)
class PropositionReport:
    proposition: int
    pair: PrimePair
    claimed: tuple[tuple[int, int], ...]
    computed: tuple[Solution, ...]
    steps: tuple[StepCheck, ...]
    errata: tuple[Erratum, ...] = ()

    @property
    def solution_set_matches(self) -> bool:
        return set(self.claimed) == {(s.x, s.y) for s in self.computed}

    @property
    def passed(self) -> bool:
        return self.solution_set_matches and all(s.passed for s in self.steps)


CLAIMS = {
    1: (PrimePair(3, 2), ((0, 0), (1, 1), (2, 3), (3, 1), (4, 5))),
    2: (PrimePair(5, 3), ((0, 0), (1, 0))),
    3: (PrimePair(7, 5), ((0, 0),)),
}

# The mod-9 step for (5, 3) claims only these x classes mod 6 survive when y >= 2.
CLAIMED_MOD9_X_CLASSES = (0, 4)


def _first_monotonicity_violation(variant: str, xmax: int, increasing: bool) -> dict | None:
    prev = f_series(1, variant)
    for x in range(1, xmax - 1, 2):
        nxt = f_series(x + 2, variant)
        if (prev > nxt) if increasing else (prev < nxt):
            return {"x": x, "f(x)": prev, "f(x+2)": nxt}
        prev = nxt
    return None


def mod9_x_classes() -> list[int]:
    return sorted(build_certificate(CLAIMS[2][0], 9).allowed_x_classes())


def check_errata(xmax: int = 51) -> list[Erratum]:
    """Recheck the monotonicity lemmas and the mod-9 class list; return every discrepancy."""
    if xmax < 9:
        raise ValueError(f"xmax must be >= 9, got {xmax}")
    out = []
    hit = _first_monotonicity_violation("A", xmax, increasing=True)
    if hit:
        out.append(Erratum("f_A(x) <= f_A(x+2) for every odd x", "proposition 1, case y = 1", hit))
    hit = _first_monotonicity_violation("B", xmax, increasing=False)
    if hit:
        out.append(Erratum("f_B(x) >= f_B(x+2) for every odd x", "proposition 2, case y = 0", hit))
    computed = mod9_x_classes()
    if tuple(computed) != CLAIMED_MOD9_X_CLASSES:
        extra = sorted(set(computed) - set(CLAIMED_MOD9_X_CLASSES))
        out.append(Erratum(
            "for y >= 2, 5^x - 3^y square mod 9 forces x = 0 or 4 (mod 6)",
            "proposition 2, case y >= 2",
            {
                "modulus": 9,
                "claimed_x_classes": list(CLAIMED_MOD9_X_CLASSES),
                "computed_x_classes": computed,
                "residues": {str(c): pow(5, c, 9) for c in extra},
                "squares_mod_9": sorted(square_residue_set(9)),
            },
        ))
    return out


def _solution_set_erratum(prop: int, pair: PrimePair, claimed, computed: Iterable[Solution]) -> Erratum | None:
    found = {(s.x, s.y): s.n for s in computed}
    extra = sorted(set(found) - set(claimed))
    missing = sorted(set(claimed) - set(found))
    if not extra and not missing:
        return None
    return Erratum(
        f"the only exponent pairs for ({pair.p},{pair.q}) are {sorted(claimed)}",
        f"proposition {prop}, statement",
        {
            "extra": [{"x": x, "y": y, "n": found[(x, y)],
                       "value": f"{pair.p}^{x} - {pair.q}^{y} = {found[(x, y)] ** 2}"} for x, y in extra],
            "missing": [{"x": x, "y": y} for x, y in missing],
        },
    )


def _prop1_steps(pair: PrimePair, sols, ring_xmax: int) -> list[StepCheck]:
    sq4 = square_residue_set(4)
    c4 = build_certificate(pair, 4)
    steps = [
        StepCheck("mod 4: y >= 2 forces x even",
                  c4.regime[1] == 2 and c4.x_period == 2 and c4.allowed_x_classes() == {0}),
        StepCheck("mod 4: y = 1 forces x odd",
                  {x % 2 for x in (1, 2) if (pow(3, x, 4) - 2) % 4 in sq4} == {1}),
        StepCheck("mod 3: y = 0 has no solution with x > 0",
                  (pow(3, 1, 3) - 1) % 3 not in square_residue_set(3)),
    ]
    ok = True
    for s in sols.solutions:
        if s.y >= 2:
            k, rem = divmod(s.x, 2)
            ok &= rem == 0 and (3**k - s.n) * (3**k + s.n) == 2**s.y and 3**k - s.n == 2
    steps.append(StepCheck("(3^k - n)(3^k + n) = 2^y with 3^k - n = 2 at every solution with y >= 2", ok))
    steps.append(StepCheck("3 = (1 - √-2)(1 + √-2)", qmul(QuadInt(1, -1, -2), QuadInt(1, 1, -2)) == QuadInt(3, 0, -2)))
    steps.append(StepCheck("f_A(1) = f_A(3) = -1, f_A(5) = 11",
                           (f_series(1, "A"), f_series(3, "A"), f_series(5, "A")) == (-1, -1, 11)))
    steps.append(StepCheck(f"Im (1 - √-2)^x = -1 exactly for x in {{1, 3}} (x <= {ring_xmax})",
                           solve_imag_equals(QuadInt(1, -1, -2), -1, ring_xmax) == {1, 3}))
    steps.append(StepCheck(f"Im (1 + √-2)^x = -1 has no solution (x <= {ring_xmax})",
                           solve_imag_equals(QuadInt(1, 1, -2), -1, ring_xmax) == set()))
    return steps


def _prop2_steps(pair: PrimePair, sols, ring_xmax: int) -> list[StepCheck]:
    c9 = build_certificate(pair, 9)
    even_x_ok = True
    for x in range(2, sols.effective_max_x + 1, 2):
        r = 5 ** (x // 2)
        even_x_ok &= (r - 1) ** 2 < 5**x - 1 < r * r
    return [
        StepCheck("mod 9 residue certificate (regime y >= 2) is sound against the search",
                  c9.regime == (0, 2) and check_soundness(c9, sols)),
        StepCheck("mod 4: y = 1 gives 5^x - 3 = 2, never a square",
                  (1 - 3) % 4 not in square_residue_set(4)),
        StepCheck("y = 0: 5^x - 1 sits strictly between consecutive squares for even x > 0", even_x_ok),
        StepCheck("5 = (2 - i)(2 + i)", qmul(QuadInt(2, -1, -1), QuadInt(2, 1, -1)) == QuadInt(5, 0, -1)),
        StepCheck("f_B(3) = -11", f_series(3, "B") == -11),
        StepCheck(f"Im (2 - i)^x = -1 exactly for x = 1 (x <= {ring_xmax})",
                  solve_imag_equals(QuadInt(2, -1, -1), -1, ring_xmax) == {1}),
        StepCheck(f"Im (2 + i)^x = -1 has no solution (x <= {ring_xmax})",
                  solve_imag_equals(QuadInt(2, 1, -1), -1, ring_xmax) == set()),
    ]


def _prop3_steps(pair: PrimePair, sols) -> list[StepCheck]:
    proof = prove_trivial_descent(pair)
    proved = isinstance(proof, DescentProof)
    return [
        StepCheck("mod 4 certificate eliminates odd x", eliminates_odd_x(build_certificate(pair, 4))),
        StepCheck("descent proof found", proved),
        StepCheck("descent proof replays", proved and replay_descent(proof).ok),
        StepCheck("2*7^k mod 25 over the full cycle is {14, 23, 11, 2}, excluding 1",
                  proved and proof.cycle.residues == (14, 23, 11, 2)),
    ]


def verify_propositions(max_x: int = 64, max_y: int = 64, max_bits: int = 4096,
                        ring_xmax: int = DEFAULT_RING_XMAX, errata_xmax: int = 51) -> list[PropositionReport]:
    if max_x < 40 or max_y < 60:
        raise ValueError("replay bounds must be at least (40, 60)")
    errata = check_errata(errata_xmax)
    reports = []
    for prop, (pair, claimed) in CLAIMS.items():
        sols = solve_pair(pair, max_x, max_y, max_bits)
        if prop == 1:
            steps = _prop1_steps(pair, sols, ring_xmax)
        elif prop == 2:
            steps = _prop2_steps(pair, sols, ring_xmax)
        else:
            steps = _prop3_steps(pair, sols)
        errs = [e for e in errata if e.location.startswith(f"proposition {prop},")]
        mismatch = _solution_set_erratum(prop, pair, claimed, sols.solutions)
        if mismatch is not None:
            errs.append(mismatch)
        reports.append(PropositionReport(prop, pair, claimed, sols.solutions, tuple(steps), tuple(errs)))
    return reports


# --- conjecture scan ---------------------------------------------------------


@dataclass(frozen=True)
class ScanConfig:
    limit: int
    bounds: Bounds = Bounds()
    m_max: int = 16

    def as_dict(self) -> dict:
        return {"limit": self.limit, "max_x": self.bounds.max_x, "max_y": self.bounds.max_y,
                "max_bits": self.bounds.max_bits, "m_max": self.m_max}


@dataclass(frozen=True)
class ConjectureScanReport:
    config: ScanConfig
    records: tuple[ClassificationRecord, ...]
    counts: dict = field(default_factory=dict)
    twin_pairs_3mod4: tuple[tuple[int, int], ...] = ()
    one_zero_witness_pairs: tuple[tuple[int, int], ...] = ()
    deterministic_primality: bool = True

    @classmethod
    def assemble(cls, config: ScanConfig, records: Iterable[ClassificationRecord]) -> ConjectureScanReport:
        records = tuple(sorted(records, key=lambda r: r.pair.p))
        counts = {v.value: 0 for v in Verdict}
        for r in records:
            counts[r.verdict.value] += 1
        twins = tuple((r.pair.p, r.pair.q) for r in records if r.pair.p - r.pair.q == 2 and r.pair.p % 4 == 3)
        one_zero = tuple((r.pair.p, r.pair.q) for r in records if any((w.x, w.y) == (1, 0) for w in r.witnesses))
        return cls(config, records, counts, twins, one_zero, all(r.pair.deterministic for r in records))

    def validate(self) -> None:
        """Re-check every witness and descent proof; raise on the first failure."""
        if sum(self.counts.values()) != len(self.records):
            raise ValueError("verdict counts do not sum to the number of records")
        for r in self.records:
            for w in r.witnesses:
                if not w.check(r.pair):
                    raise ValueError(f"witness {w} for {r.pair} does not satisfy the equation")
            if r.proof is not None and not replay_descent(r.proof).ok:
                raise ValueError(f"descent proof for {r.pair} does not replay")


@dataclass
class ScanCheckpoint:
    config: ScanConfig
    last_p: int
    records: list[ClassificationRecord]

    @property
    def counts(self) -> dict:
        counts = {v.value: 0 for v in Verdict}
        for r in self.records:
            counts[r.verdict.value] += 1
        return counts


def _classify(args: tuple[PrimePair, Bounds, int]) -> ClassificationRecord:
    pair, bounds, m_max = args
    return classify_pair(pair, bounds, m_max=m_max, residue_cap=SCAN_RESIDUE_CAP)


def scan_conjectures(
    limit: int,
    bounds: Bounds = Bounds(),
    m_max: int = 16,
    *,
    workers: int = 1,
    checkpoint_every: int = CHECKPOINT_EVERY,
    resume: ScanCheckpoint | None = None,
    on_checkpoint: Callable[[ScanCheckpoint], None] | None = None,
) -> ConjectureScanReport:
    """Classify every consecutive pair with p <= limit.

    Pairs are processed in blocks of ``checkpoint_every``; after each block
    ``on_checkpoint`` receives the accumulated state, which can be handed
    back as ``resume`` to continue an interrupted run. The report does not
    depend on ``workers`` or on where a run was resumed.
    """
    if limit < 3:
        raise ValueError(f"limit must be >= 3, got {limit}")
    config = ScanConfig(limit, bounds, m_max)
    if resume is not None:
        if resume.config != config:
            raise ValueError(f"checkpoint was written for {resume.config.as_dict()}, not {config.as_dict()}")
        state = ScanCheckpoint(config, resume.last_p, list(resume.records))
    else:
        state = ScanCheckpoint(config, 0, [])
    pairs = iter_consecutive_pairs(limit, after=state.last_p)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while block := list(islice(pairs, checkpoint_every)):
            tasks = [(pair, bounds, m_max) for pair in block]
            if pool is None:
                done = list(map(_classify, tasks))
            else:
                done = list(pool.map(_classify, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
            state.records.extend(done)
            state.last_p = block[-1].p
            log.info("scanned through p = %d (%d pairs)", state.last_p, len(state.records))
            if on_checkpoint is not None:
                on_checkpoint(ScanCheckpoint(config, state.last_p, list(state.records)))
    finally:
        if pool is not None:
            pool.shutdown()
    report = ConjectureScanReport.assemble(config, state.records)
    report.validate()
    return report
