#!/usr/bin/env python3
"""Agreement study: graph-based verdicts against brute-force oracles.

Draws seeded random arrays (unit-edge inputs with random injection
vectors), runs the three decidable oracles against the corresponding
analyses for every vertex pair, and reports the outcome counts.  Any
disagreement is a bug and exits nonzero.

Usage:
    python scripts/oracle_agreement.py [--specs N] [--seed S]
"""

import argparse
import time

import numpy as np

from relctrl import analyze, brammer_positive, kalman_reduced, pairwise_range
from relctrl.array_model import ArraySpec


def random_spec(rng, n_max=3, q_max=4, p_max=5) -> ArraySpec:
    n = int(rng.integers(1, n_max + 1))
    q = int(rng.integers(2, q_max + 1))
    p = int(rng.integers(1, p_max + 1))
    A = rng.standard_normal((n, n))
    B = np.zeros((q, p, n))
    for s in range(p):
        i, j = rng.choice(q, size=2, replace=False)
        w = rng.standard_normal(n)
        B[i, s] = w
        B[j, s] = -w
    return ArraySpec(n=n, q=q, p=p, A=A, B=B)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--specs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=20260809)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    counts = {"controllable": 0, "positive": 0, "pairs": 0, "pairs_yes": 0}
    disagreements = 0
    started = time.perf_counter()
    for index in range(args.specs):
        spec = random_spec(rng)
        pairs = [
            (k, l)
            for k in range(1, spec.q + 1)
            for l in range(1, spec.q + 1)
            if k != l
        ]
        report = analyze(spec, pairs=pairs)
        checks = [
            ("kalman", report.controllable, kalman_reduced(spec)),
            ("brammer", report.positively_controllable, brammer_positive(spec)),
        ]
        for pair in pairs:
            checks.append(
                (f"range{pair}", report.pairwise[pair], pairwise_range(spec, *pair))
            )
            counts["pairs"] += 1
            counts["pairs_yes"] += report.pairwise[pair]
        for label, ours, oracle in checks:
            if ours != oracle:
                disagreements += 1
                print(f"DISAGREEMENT on spec {index} [{label}]: analysis={ours} oracle={oracle}")
        counts["controllable"] += report.controllable
        counts["positive"] += report.positively_controllable

    elapsed = time.perf_counter() - started
    print(
        f"{args.specs} specs in {elapsed:.1f}s: "
        f"{counts['controllable']} controllable, {counts['positive']} positively controllable, "
        f"{counts['pairs_yes']}/{counts['pairs']} pairwise-controllable pairs, "
        f"{disagreements} disagreements"
    )
    return 1 if disagreements else 0


if __name__ == "__main__":
    raise SystemExit(main())
