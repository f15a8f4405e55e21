#!/usr/bin/env python3
"""Run the exhaustive and randomized engine cross-checks and print a summary.

Compares every fast procedure against the game-tree engine over the bounded
instance families, prints one line per family, and exits nonzero on any
disagreement.  Shapes are chosen to finish in a few minutes; pass --quick
for a smoke-sized run.
"""

from __future__ import annotations

import argparse
import sys
import time

from seqvote.grids import (
    approval_family_cases,
    plurality_cases,
    run_crosscheck,
    veto_exhaustive_cases,
    veto_random_cases,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller shapes")
    parser.add_argument("--seed", type=int, default=20240817)
    args = parser.parse_args()

    if args.quick:
        families = [
            ("plurality", plurality_cases(m_values=(2,), max_voters=3)),
            ("approval/veto", approval_family_cases(m_values=(2, 3), max_voters=3)),
            ("one-veto exhaustive", veto_exhaustive_cases(m=3, max_voters=3)),
            ("one-veto random", veto_random_cases(args.seed, 200)),
        ]
    else:
        families = [
            ("plurality", plurality_cases(m_values=(2, 3), max_voters=4)),
            ("approval/veto", approval_family_cases(m_values=(2, 3, 4), max_voters=4)),
            ("one-veto exhaustive", veto_exhaustive_cases(m=3, max_voters=4)),
            ("one-veto random", veto_random_cases(args.seed, 1000)),
        ]

    failed = False
    for label, cases in families:
        started = time.perf_counter()
        report = run_crosscheck(cases)
        elapsed = time.perf_counter() - started
        status = "ok" if report.ok else "FAIL"
        print(
            f"{label:<22} {status:>4}  cases={report.checked:>7} "
            f"solved={report.solved:>6}  {elapsed:7.1f}s"
        )
        for key, instance, answers in report.disagreements:
            print(f"  disagreement fast={answers[0]} game={answers[1]} key={key}")
            print(f"    instance: {instance}")
        if not report.ok:
            failed = True
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
