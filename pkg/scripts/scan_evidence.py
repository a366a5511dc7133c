"""Classify every consecutive prime pair up to a limit and summarize the evidence.

    python scripts/scan_evidence.py --limit 5000 --workers 4 [--max-x 30 --max-y 30]
"""

import argparse
import time

from squaredpairs.proofcheck import scan_conjectures
from squaredpairs.search import Bounds


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=1000)
    ap.add_argument("--max-x", type=int, default=30)
    ap.add_argument("--max-y", type=int, default=30)
    ap.add_argument("--m-max", type=int, default=16)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    t0 = time.perf_counter()
    report = scan_conjectures(args.limit, Bounds(args.max_x, args.max_y), args.m_max, workers=args.workers)
    elapsed = time.perf_counter() - t0

    print(f"{len(report.records)} pairs up to {args.limit} in {elapsed:.1f} s")
    for verdict, count in report.counts.items():
        print(f"  {verdict:>15}: {count}")
    print(f"twin pairs with p = 3 mod 4: {list(report.twin_pairs_3mod4)}")
    print(f"pairs with the (1, 0) witness: {list(report.one_zero_witness_pairs)}")
    by_step: dict[str, int] = {}
    for r in report.records:
        if r.inconclusive is not None:
            by_step[r.inconclusive.step] = by_step.get(r.inconclusive.step, 0) + 1
    print(f"unresolved pairs by blocking step: {dict(sorted(by_step.items()))}")


if __name__ == "__main__":
    main()
