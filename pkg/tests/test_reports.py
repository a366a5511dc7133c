import json

import pytest

from squaredpairs.certificate import build_certificate, prove_trivial_descent, search_modulus
from squaredpairs.primes import PrimePair
from squaredpairs.proofcheck import scan_conjectures, verify_propositions
from squaredpairs.reports import (
    ReportEnvelope,
    ReportError,
    checkpoint_from_dict,
    checkpoint_to_dict,
    scan_csv,
    timestamp,
)
from squaredpairs.search import Bounds, solve_pair


def roundtrip(env: ReportEnvelope) -> ReportEnvelope:
    text = env.to_json()
    back = ReportEnvelope.from_json(text)
    assert back.to_json() == text
    return back


@pytest.mark.parametrize("payload_type, payload", [
    ("solution_set", solve_pair(PrimePair(3, 2), 64, 64)),
    ("certificate", build_certificate(PrimePair(5, 3), 9)),
    ("certificates", search_modulus(PrimePair(7, 5), 12)),
    ("descent", prove_trivial_descent(PrimePair(7, 5))),
    ("descent", prove_trivial_descent(PrimePair(11, 7))),
    ("scan", scan_conjectures(120, Bounds(10, 10), m_max=6)),
    ("ring", {"base": {"a": 1, "b": -1, "d": -2}, "exponent": 5, "result": {"a": 1, "b": 11, "d": -2}, "norm": 243}),
])
def test_envelopes_roundtrip(payload_type, payload):
    back = roundtrip(ReportEnvelope.create("x", {"k": 1}, payload_type, payload))
    assert back.payload == payload
    assert back.schema_version == 1


def test_propositions_roundtrip():
    reports = verify_propositions(ring_xmax=100)
    back = roundtrip(ReportEnvelope.create("verify-paper", {}, "propositions", reports))
    assert back.payload == reports


def test_big_n_is_exact():
    env = ReportEnvelope.create("solve", {}, "solution_set", solve_pair(PrimePair(3, 2), 64, 64))
    d = json.loads(env.to_json())
    assert all(isinstance(s["n"], int) for s in d["payload"]["solutions"])


def test_tampered_witness_is_rejected():
    env = ReportEnvelope.create("solve", {}, "solution_set", solve_pair(PrimePair(3, 2), 8, 8))
    d = env.to_dict()
    d["payload"]["solutions"][1]["n"] += 1
    with pytest.raises(ReportError):
        ReportEnvelope.from_dict(d)


def test_tampered_proof_is_rejected():
    d = ReportEnvelope.create("descent", {}, "descent", prove_trivial_descent(PrimePair(7, 5))).to_dict()
    d["payload"]["steps"][3]["residues"][0] = 1
    with pytest.raises(ReportError):
        ReportEnvelope.from_dict(d)


def test_tampered_scan_summary_is_rejected():
    d = ReportEnvelope.create("scan", {}, "scan", scan_conjectures(60, Bounds(8, 8))).to_dict()
    d["payload"]["counts"]["nontrivial"] += 1
    with pytest.raises(ReportError):
        ReportEnvelope.from_dict(d)


def test_schema_version_is_checked():
    d = ReportEnvelope.create("ring", {}, "ring", {}).to_dict()
    d["schema_version"] = 2
    with pytest.raises(ReportError):
        ReportEnvelope.from_dict(d)


def test_checkpoint_roundtrip():
    seen = []
    scan_conjectures(100, Bounds(8, 8), checkpoint_every=9, on_checkpoint=seen.append)
    for ck in seen:
        d = json.loads(json.dumps(checkpoint_to_dict(ck)))
        back = checkpoint_from_dict(d)
        assert back == ck
        assert d["last_p"] == ck.records[-1].pair.p


def test_csv_matches_json_verdicts():
    rep = scan_conjectures(150, Bounds(10, 10))
    rows = scan_csv(rep).strip().splitlines()[1:]
    assert [tuple(r.split(",")[:3]) for r in rows] == [
        (str(r.pair.p), str(r.pair.q), r.verdict.value) for r in rep.records
    ]


def test_timestamp_honours_source_date_epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    assert timestamp() == "1970-01-01T00:00:00Z"
    monkeypatch.delenv("SOURCE_DATE_EPOCH")
    assert timestamp().endswith("Z")
