"""Replay the three small-pair propositions and print steps, errata and verdicts.

    python scripts/replay_propositions.py [--max-x 64] [--max-y 64]
"""

import argparse

from squaredpairs.proofcheck import verify_propositions


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-x", type=int, default=64)
    ap.add_argument("--max-y", type=int, default=64)
    args = ap.parse_args()

    for report in verify_propositions(args.max_x, args.max_y):
        status = "matches" if report.solution_set_matches else "MISMATCH"
        print(f"proposition {report.proposition} {report.pair}: solution set {status}")
        print(f"  computed: {sorted((s.x, s.y, s.n) for s in report.computed)}")
        for step in report.steps:
            print(f"  [{'ok' if step.passed else '!!'}] {step.description}")
        for err in report.errata:
            print(f"  erratum @ {err.location}: {err.claim} -> {err.counterexample}")


if __name__ == "__main__":
    main()
