"""Command-line front end.

    squaredpairs solve --p 7 --q 5 --max-x 40 --max-y 60 --format json
    squaredpairs scan --limit 1000 --workers 4 --out scan.json
    squaredpairs certify --p 7 --q 5 --modulus 4
    squaredpairs descent --p 7 --q 5
    squaredpairs ring --d -2 --base 1,-1 --pow 5
    squaredpairs verify-paper

Exit codes: 0 success, 1 proposition replay mismatch (verify-paper only),
2 usage or input error, 3 I/O error. Errors are printed to stderr as a JSON
object ``{"error": {"kind": ..., "message": ...}}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .arith import MagnitudeError
from .certificate import build_certificate, prove_trivial_descent, search_modulus
from .primes import DETERMINISTIC_LIMIT, PrimePair
from .proofcheck import CHECKPOINT_EVERY, DEFAULT_RING_XMAX, ScanCheckpoint, scan_conjectures, verify_propositions
from .quadring import QuadInt, qpow, solve_imag_equals
from .reports import (
    ReportEnvelope,
    ReportError,
    checkpoint_from_dict,
    checkpoint_to_dict,
    scan_csv,
    scan_text,
    solutions_csv,
    solutions_text,
)
from .search import Bounds, solve_pair

# Documented caps on numeric arguments.
CAPS = {
    "max_x": 4096,
    "max_y": 4096,
    "max_bits": 1 << 16,
    "limit": 2**32,
    "m_max": 10**4,
    "modulus": 10**6,
    "workers": 256,
    "xmax": 10**5,
    "pow": 10**5,
    "checkpoint_every": 10**7,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _nonneg(name: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{name} must be nonnegative")
        cap = CAPS.get(name)
        if cap is not None and value > cap:
            raise argparse.ArgumentTypeError(f"{name} = {value} exceeds cap {cap}")
        return value
    return parse


def _base(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--base expects a,b, got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="squaredpairs", description="p^x - q^y = n^2 over consecutive primes")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def bounds(sp, max_x=64, max_y=64, bits=True):
        sp.add_argument("--max-x", type=_nonneg("max_x"), default=max_x)
        sp.add_argument("--max-y", type=_nonneg("max_y"), default=max_y)
        if bits:
            sp.add_argument("--max-bits", type=_nonneg("max_bits"), default=4096)

    sp = sub.add_parser("solve", help="bounded solution set for one pair")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    bounds(sp)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out", type=Path)

    sp = sub.add_parser("scan", help="classify every consecutive pair up to a limit")
    sp.add_argument("--limit", type=_nonneg("limit"), required=True)
    bounds(sp)
    sp.add_argument("--m-max", type=_nonneg("m_max"), default=16)
    sp.add_argument("--workers", type=_nonneg("workers"), default=1)
    sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sp.add_argument("--out", type=Path)
    sp.add_argument("--resume", type=Path, help="checkpoint file to continue from (and keep updating)")
    sp.add_argument("--checkpoint-every", type=_nonneg("checkpoint_every"), default=CHECKPOINT_EVERY)

    sp = sub.add_parser("certify", help="residue certificates for one pair")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--modulus", type=_nonneg("modulus"))
    g.add_argument("--search-max-m", type=_nonneg("m_max"))

    sp = sub.add_parser("descent", help="try the descent proof of trivial squaredness")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)

    sp = sub.add_parser("ring", help="powers and imaginary-part equations in Z[sqrt(d)]")
    sp.add_argument("--d", type=int, choices=(-1, -2), required=True)
    sp.add_argument("--base", type=_base, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--pow", type=_nonneg("pow"))
    g.add_argument("--solve-imag", type=int)
    sp.add_argument("--xmax", type=_nonneg("xmax"))

    sp = sub.add_parser("verify-paper", help="replay the (3,2), (5,3), (7,5) propositions and errata")
    bounds(sp, bits=False)
    sp.add_argument("--out", type=Path)
    return parser


@dataclass
class Outcome:
    text: str
    code: int = 0


def _pair(args) -> PrimePair:
    try:
        return PrimePair(args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _solve(args) -> Outcome:
    pair = _pair(args)
    sols = solve_pair(pair, args.max_x, args.max_y, args.max_bits)
    config = {"p": pair.p, "q": pair.q, "max_x": args.max_x, "max_y": args.max_y, "max_bits": args.max_bits}
    if args.format == "csv":
        return Outcome(solutions_csv(sols))
    if args.format == "text":
        return Outcome(solutions_text(sols))
    return Outcome(ReportEnvelope.create("solve", config, "solution_set", sols).to_json())


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _scan(args) -> Outcome:
    if args.limit < 3:
        raise UsageError("--limit must be at least 3")
    if args.limit >= DETERMINISTIC_LIMIT:
        raise UsageError("--limit beyond the deterministic primality range")
    if args.workers < 1 or args.checkpoint_every < 1:
        raise UsageError("--workers and --checkpoint-every must be positive")
    bounds = Bounds(args.max_x, args.max_y, args.max_bits)
    ckpt_path = args.resume or (args.out.with_name(args.out.name + ".ckpt") if args.out else None)
    resume = None
    if args.resume is not None:
        try:
            resume = checkpoint_from_dict(json.loads(args.resume.read_text()))
        except OSError as exc:
            raise OSError(f"cannot read checkpoint {args.resume}: {exc}") from exc
        except (ReportError, ValueError, KeyError) as exc:
            raise UsageError(f"bad checkpoint {args.resume}: {exc}") from None

    def save(state: ScanCheckpoint) -> None:
        if ckpt_path is not None:
            _write_atomic(ckpt_path, json.dumps(checkpoint_to_dict(state)) + "\n")

    try:
        report = scan_conjectures(args.limit, bounds, args.m_max, workers=args.workers,
                                  checkpoint_every=args.checkpoint_every, resume=resume, on_checkpoint=save)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        return Outcome(scan_csv(report))
    if args.format == "text":
        return Outcome(scan_text(report))
    # Worker count and file paths do not affect results and are left out of the echo.
    return Outcome(ReportEnvelope.create("scan", report.config.as_dict(), "scan", report).to_json())


def _certify(args) -> Outcome:
    pair = _pair(args)
    if args.modulus is not None:
        if args.modulus < 2:
            raise UsageError("--modulus must be at least 2")
        cert = build_certificate(pair, args.modulus)
        env = ReportEnvelope.create("certify", {"p": pair.p, "q": pair.q, "modulus": args.modulus}, "certificate", cert)
    else:
        if args.search_max_m < 2:
            raise UsageError("--search-max-m must be at least 2")
        certs = search_modulus(pair, args.search_max_m)
        env = ReportEnvelope.create("certify", {"p": pair.p, "q": pair.q, "search_max_m": args.search_max_m},
                                    "certificates", certs)
    return Outcome(env.to_json())


def _descent(args) -> Outcome:
    pair = _pair(args)
    outcome = prove_trivial_descent(pair)
    return Outcome(ReportEnvelope.create("descent", {"p": pair.p, "q": pair.q}, "descent", outcome).to_json())


def _ring(args) -> Outcome:
    try:
        base = QuadInt(*args.base, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = {"d": args.d, "base": {"a": base.a, "b": base.b}}
    if args.pow is not None:
        r = qpow(base, args.pow)
        config["pow"] = args.pow
        payload = {"base": {"a": base.a, "b": base.b, "d": base.d}, "exponent": args.pow,
                   "result": {"a": r.a, "b": r.b, "d": r.d}, "norm": r.norm()}
    else:
        if args.xmax is None or args.xmax < 1:
            raise UsageError("--solve-imag needs --xmax >= 1")
        config.update(solve_imag=args.solve_imag, xmax=args.xmax)
        hits = sorted(solve_imag_equals(base, args.solve_imag, args.xmax))
        payload = {"base": {"a": base.a, "b": base.b, "d": base.d}, "target": args.solve_imag,
                   "xmax": args.xmax, "solutions": hits}
    return Outcome(ReportEnvelope.create("ring", config, "ring", payload).to_json())


def _verify(args) -> Outcome:
    if args.max_x < 40 or args.max_y < 60:
        raise UsageError("verify-paper needs --max-x >= 40 and --max-y >= 60")
    reports = verify_propositions(args.max_x, args.max_y, ring_xmax=DEFAULT_RING_XMAX)
    config = {"max_x": args.max_x, "max_y": args.max_y, "max_bits": 4096, "ring_xmax": DEFAULT_RING_XMAX}
    env = ReportEnvelope.create("verify-paper", config, "propositions", reports)
    # Errata alone never fail the run; only a solution-set mismatch does.
    code = 0 if all(r.solution_set_matches for r in reports) else 1
    return Outcome(env.to_json(), code)


_COMMANDS = {
    "solve": _solve,
    "scan": _scan,
    "certify": _certify,
    "descent": _descent,
    "ring": _ring,
    "verify-paper": _verify,
}


def _error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": {"kind": kind, "message": message}}), file=sys.stderr)
    return code


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _error("usage", str(exc), 2)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    out = getattr(args, "out", None)
    if out is not None and not os.access(out.parent if str(out.parent) else Path("."), os.W_OK):
        return _error("io", f"output directory {out.parent} is not writable", 3)
    try:
        outcome = _COMMANDS[args.command](args)
        if out is not None:
            out.write_text(outcome.text)
        else:
            stdout.write(outcome.text)
    except UsageError as exc:
        return _error("usage", str(exc), 2)
    except MagnitudeError as exc:
        return _error("magnitude", str(exc), 2)
    except OSError as exc:
        return _error("io", str(exc), 3)
    return outcome.code


def main() -> int:
    return run(sys.argv[1:])
