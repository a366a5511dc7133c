"""JSON (and CSV/text) encodings of every result type, plus the report envelope.

Encoders produce plain dicts with lowercase snake_case keys; decoders invert
them exactly and re-validate witnesses and descent proofs on the way in.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, fields
from datetime import datetime, timezone

from . import __version__
from .certificate import (
    CycleStep,
    DescentProof,
    FactorStep,
    ForcingStep,
    Inconclusive,
    ParityStep,
    ResidueCertificate,
    SmallCasesStep,
    replay_descent,
)
from .primes import PrimePair
from .proofcheck import ConjectureScanReport, Erratum, PropositionReport, ScanCheckpoint, ScanConfig, StepCheck
from .search import Bounds, CertificateNote, ClassificationRecord, Solution, SolutionSet, Verdict

SCHEMA_VERSION = 1
TOOL = "squaredpairs"


class ReportError(ValueError):
    """A serialized report is malformed or fails re-validation."""


def pair_to_dict(pair: PrimePair) -> dict:
    return {"p": pair.p, "q": pair.q}


def pair_from_dict(d: dict) -> PrimePair:
    return PrimePair(int(d["p"]), int(d["q"]))


def solution_to_dict(s: Solution) -> dict:
    return {"x": s.x, "y": s.y, "n": s.n}


def solution_from_dict(d: dict) -> Solution:
    return Solution(int(d["x"]), int(d["y"]), int(d["n"]))


def bounds_to_dict(b: Bounds) -> dict:
    return {"max_x": b.max_x, "max_y": b.max_y, "max_bits": b.max_bits}


def bounds_from_dict(d: dict) -> Bounds:
    return Bounds(int(d["max_x"]), int(d["max_y"]), int(d["max_bits"]))


def solution_set_to_dict(s: SolutionSet) -> dict:
    return {
        "pair": pair_to_dict(s.pair),
        "bounds": bounds_to_dict(s.bounds),
        "effective_max_x": s.effective_max_x,
        "truncated": s.truncated,
        "primality": "deterministic" if s.pair.deterministic else "probable",
        "solutions": [solution_to_dict(x) for x in s.solutions],
    }


def solution_set_from_dict(d: dict) -> SolutionSet:
    pair = pair_from_dict(d["pair"])
    sols = tuple(solution_from_dict(x) for x in d["solutions"])
    for s in sols:
        if not s.check(pair):
            raise ReportError(f"solution {s} does not satisfy the equation for {pair}")
    return SolutionSet(pair, bounds_from_dict(d["bounds"]), sols, int(d["effective_max_x"]), bool(d["truncated"]))


def certificate_to_dict(c: ResidueCertificate) -> dict:
    return {
        "pair": pair_to_dict(c.pair),
        "modulus": c.modulus,
        "x_preperiod": c.x_preperiod,
        "x_period": c.x_period,
        "y_preperiod": c.y_preperiod,
        "y_period": c.y_period,
        "regime": list(c.regime),
        "eliminated_fraction": round(c.eliminated_fraction, 12),
        "allowed_classes": [list(ab) for ab in sorted(c.allowed)],
    }


def certificate_from_dict(d: dict) -> ResidueCertificate:
    return ResidueCertificate(
        pair=pair_from_dict(d["pair"]),
        modulus=int(d["modulus"]),
        x_preperiod=int(d["x_preperiod"]),
        x_period=int(d["x_period"]),
        y_preperiod=int(d["y_preperiod"]),
        y_period=int(d["y_period"]),
        allowed=frozenset((int(a), int(b)) for a, b in d["allowed_classes"]),
    )


_STEP_TYPES = {
    "parity": ParityStep,
    "factorization": FactorStep,
    "exponent_forcing": ForcingStep,
    "cycle_check": CycleStep,
    "small_cases": SmallCasesStep,
}


def _step_to_dict(name: str, step: object) -> dict:
    out = {"step": name}
    for f in fields(step):
        value = getattr(step, f.name)
        out[f.name] = list(value) if isinstance(value, tuple) else value
    return out


def _step_from_dict(d: dict) -> object:
    cls = _STEP_TYPES[d["step"]]
    kwargs = {}
    for f in fields(cls):
        value = d[f.name]
        kwargs[f.name] = tuple(value) if isinstance(value, list) else value
    return cls(**kwargs)


def descent_to_dict(proof: DescentProof) -> dict:
    return {
        "pair": pair_to_dict(proof.pair),
        "outcome": "proved",
        "steps": [_step_to_dict(name, step) for name, step in proof.steps()],
    }


def inconclusive_to_dict(inc: Inconclusive) -> dict:
    return {"pair": pair_to_dict(inc.pair), "outcome": "inconclusive", "step": inc.step, "reason": inc.reason}


def descent_from_dict(d: dict) -> DescentProof | Inconclusive:
    pair = pair_from_dict(d["pair"])
    if d["outcome"] == "inconclusive":
        return Inconclusive(pair, d["step"], d["reason"])
    steps = {s["step"]: _step_from_dict(s) for s in d["steps"]}
    proof = DescentProof(pair, steps["parity"], steps["factorization"], steps["exponent_forcing"],
                         steps["cycle_check"], steps["small_cases"])
    replay = replay_descent(proof)
    if not replay.ok:
        raise ReportError(f"descent proof for {pair} does not replay: {replay.failures}")
    return proof


def record_to_dict(r: ClassificationRecord) -> dict:
    return {
        "pair": pair_to_dict(r.pair),
        "verdict": r.verdict.value,
        "solution_count": r.solution_count,
        "truncated": r.truncated,
        "witnesses": [solution_to_dict(w) for w in r.witnesses],
        "proof": descent_to_dict(r.proof) if r.proof else None,
        "inconclusive": inconclusive_to_dict(r.inconclusive) if r.inconclusive else None,
        "certificates": [
            {"modulus": c.modulus, "x_period": c.x_period, "y_period": c.y_period,
             "regime": list(c.regime), "eliminated_fraction": c.eliminated_fraction}
            for c in r.certificates
        ],
    }


def record_from_dict(d: dict, bounds: Bounds) -> ClassificationRecord:
    pair = pair_from_dict(d["pair"])
    witnesses = tuple(solution_from_dict(w) for w in d["witnesses"])
    for w in witnesses:
        if not w.check(pair):
            raise ReportError(f"witness {w} does not satisfy the equation for {pair}")
    return ClassificationRecord(
        pair=pair,
        verdict=Verdict(d["verdict"]),
        bounds=bounds,
        solution_count=int(d["solution_count"]),
        truncated=bool(d["truncated"]),
        witnesses=witnesses,
        proof=descent_from_dict(d["proof"]) if d["proof"] else None,
        inconclusive=descent_from_dict(d["inconclusive"]) if d["inconclusive"] else None,
        certificates=tuple(
            CertificateNote(int(c["modulus"]), int(c["x_period"]), int(c["y_period"]),
                            tuple(c["regime"]), float(c["eliminated_fraction"]))
            for c in d["certificates"]
        ),
    )


def erratum_to_dict(e: Erratum) -> dict:
    return {"claim": e.claim, "location": e.location, "counterexample": e.counterexample}


def erratum_from_dict(d: dict) -> Erratum:
    return Erratum(d["claim"], d["location"], d["counterexample"])


def proposition_to_dict(r: PropositionReport) -> dict:
    return {
        "proposition": r.proposition,
        "pair": pair_to_dict(r.pair),
        "passed": r.passed,
        "solution_set_matches": r.solution_set_matches,
        "claimed": [list(xy) for xy in r.claimed],
        "computed": [solution_to_dict(s) for s in r.computed],
        "steps": [{"description": s.description, "passed": s.passed} for s in r.steps],
        "errata": [erratum_to_dict(e) for e in r.errata],
    }


def proposition_from_dict(d: dict) -> PropositionReport:
    rep = PropositionReport(
        proposition=int(d["proposition"]),
        pair=pair_from_dict(d["pair"]),
        claimed=tuple(tuple(xy) for xy in d["claimed"]),
        computed=tuple(solution_from_dict(s) for s in d["computed"]),
        steps=tuple(StepCheck(s["description"], bool(s["passed"])) for s in d["steps"]),
        errata=tuple(erratum_from_dict(e) for e in d["errata"]),
    )
    if rep.passed != d["passed"]:
        raise ReportError(f"proposition {rep.proposition}: stored pass flag disagrees with its contents")
    return rep


def propositions_to_dict(reports: list[PropositionReport]) -> dict:
    return {
        "all_passed": all(r.passed for r in reports),
        "errata_flag": any(r.errata for r in reports),
        "reports": [proposition_to_dict(r) for r in reports],
    }


def propositions_from_dict(d: dict) -> list[PropositionReport]:
    reports = [proposition_from_dict(r) for r in d["reports"]]
    if propositions_to_dict(reports) != d:
        raise ReportError("proposition summary flags disagree with the reports")
    return reports


def scan_config_from_dict(d: dict) -> ScanConfig:
    return ScanConfig(int(d["limit"]), Bounds(int(d["max_x"]), int(d["max_y"]), int(d["max_bits"])), int(d["m_max"]))


def scan_to_dict(r: ConjectureScanReport) -> dict:
    return {
        "config": r.config.as_dict(),
        "deterministic_primality": r.deterministic_primality,
        "counts": dict(r.counts),
        "twin_pairs_3mod4": [list(t) for t in r.twin_pairs_3mod4],
        "one_zero_witness_pairs": [list(t) for t in r.one_zero_witness_pairs],
        "records": [record_to_dict(x) for x in r.records],
    }


def scan_from_dict(d: dict) -> ConjectureScanReport:
    config = scan_config_from_dict(d["config"])
    records = [record_from_dict(x, config.bounds) for x in d["records"]]
    rep = ConjectureScanReport.assemble(config, records)
    if scan_to_dict(rep) != d:
        raise ReportError("scan summary fields disagree with the per-pair records")
    rep.validate()
    return rep


def checkpoint_to_dict(c: ScanCheckpoint) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scan_checkpoint",
        "config": c.config.as_dict(),
        "last_p": c.last_p,
        "counts": c.counts,
        "records": [record_to_dict(r) for r in c.records],
    }


def checkpoint_from_dict(d: dict) -> ScanCheckpoint:
    if d.get("kind") != "scan_checkpoint" or d.get("schema_version") != SCHEMA_VERSION:
        raise ReportError("not a scan checkpoint of a supported schema version")
    config = scan_config_from_dict(d["config"])
    ckpt = ScanCheckpoint(config, int(d["last_p"]), [record_from_dict(r, config.bounds) for r in d["records"]])
    if ckpt.counts != d["counts"]:
        raise ReportError("checkpoint counts disagree with its records")
    return ckpt


_PAYLOADS = {
    "solution_set": (solution_set_to_dict, solution_set_from_dict),
    "certificate": (certificate_to_dict, certificate_from_dict),
    "certificates": (lambda cs: [certificate_to_dict(c) for c in cs],
                     lambda ds: [certificate_from_dict(d) for d in ds]),
    "descent": (lambda p: descent_to_dict(p) if isinstance(p, DescentProof) else inconclusive_to_dict(p),
                descent_from_dict),
    "propositions": (lambda rs: propositions_to_dict(rs), lambda d: propositions_from_dict(d)),
    "scan": (scan_to_dict, scan_from_dict),
    "ring": (lambda d: d, lambda d: d),
}


def timestamp() -> str:
    """UTC time in ISO form; SOURCE_DATE_EPOCH pins it for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.replace(microsecond=0).isoformat().replace("+00:00", "Z")


@dataclass
class ReportEnvelope:
    command: str
    config: dict
    payload_type: str
    payload: object
    timestamp: str
    schema_version: int = SCHEMA_VERSION
    tool_version: str = __version__

    @classmethod
    def create(cls, command: str, config: dict, payload_type: str, payload: object) -> ReportEnvelope:
        return cls(command, config, payload_type, payload, timestamp())

    def to_dict(self) -> dict:
        encode, _ = _PAYLOADS[self.payload_type]
        return {
            "schema_version": self.schema_version,
            "tool": TOOL,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "command": self.command,
            "config": self.config,
            "payload_type": self.payload_type,
            "payload": encode(self.payload),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> ReportEnvelope:
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ReportError(f"unsupported schema_version {d.get('schema_version')!r}")
        _, decode = _PAYLOADS[d["payload_type"]]
        return cls(d["command"], d["config"], d["payload_type"], decode(d["payload"]), d["timestamp"],
                   d["schema_version"], d["tool_version"])

    @classmethod
    def from_json(cls, text: str) -> ReportEnvelope:
        return cls.from_dict(json.loads(text))


# --- flat formats ------------------------------------------------------------


def solutions_csv(s: SolutionSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "q", "x", "y", "n"])
    for sol in s.solutions:
        w.writerow([s.pair.p, s.pair.q, sol.x, sol.y, sol.n])
    return buf.getvalue()


def solutions_text(s: SolutionSet) -> str:
    lines = [f"{s.pair.p}^x - {s.pair.q}^y = n^2 with x <= {s.effective_max_x}, y <= {s.bounds.max_y}"
             + (" (x range truncated by bit cap)" if s.truncated else "")]
    lines += [f"  x={sol.x} y={sol.y} n={sol.n}" for sol in s.solutions]
    return "\n".join(lines) + "\n"


def scan_csv(r: ConjectureScanReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "q", "verdict", "solution_count", "truncated", "witnesses", "inconclusive_step"])
    for rec in r.records:
        wit = ";".join(f"{s.x}:{s.y}:{s.n}" for s in rec.witnesses)
        w.writerow([rec.pair.p, rec.pair.q, rec.verdict.value, rec.solution_count, int(rec.truncated), wit,
                    rec.inconclusive.step if rec.inconclusive else ""])
    return buf.getvalue()


def scan_text(r: ConjectureScanReport) -> str:
    c = r.counts
    lines = [
        f"consecutive pairs with p <= {r.config.limit}: {len(r.records)}",
        f"  proved trivial: {c['proved_trivial']}  nontrivial: {c['nontrivial']}  unresolved: {c['unresolved']}",
        f"  twin pairs with p = 3 (mod 4): {len(r.twin_pairs_3mod4)}",
        f"  pairs with a (1,0) witness: {', '.join(f'({p},{q})' for p, q in r.one_zero_witness_pairs) or 'none'}",
    ]
    return "\n".join(lines) + "\n"
