#!/usr/bin/env python3
"""Probe positive pairwise steering of a spec file with both evidence tools.

Runs the discretized reach simulator toward +/-(e_k - e_l) targets and
the randomized polar-cone falsifier for the given pair, then prints both
outcomes next to the graph-based verdict.  Residuals are evidence, not
proof; a validated falsifier witness is a proof of impossibility.

Usage:
    python scripts/reach_probe.py spec.json K L [--horizon T] [--steps M]
                                  [--attempts N] [--seed S]
"""

import argparse
from pathlib import Path

from relctrl import (
    is_positive_pairwise_controllable,
    make_reach_problem,
    polar_falsifier,
    reach_simulator,
)
from relctrl.specio import load_spec


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("path", type=Path)
    parser.add_argument("k", type=int)
    parser.add_argument("l", type=int)
    parser.add_argument("--horizon", type=float, default=5.0)
    parser.add_argument("--steps", type=int, default=60)
    parser.add_argument("--attempts", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    spec, tol = load_spec(args.path)
    yes, conditional, _ = is_positive_pairwise_controllable(
        spec, args.k, args.l, tolerances=tol
    )
    label = "yes" if yes else "no"
    if conditional:
        label += " (conditional)"
    print(f"graph verdict for positive ({args.k},{args.l}) steering: {label}")

    results = reach_simulator(
        make_reach_problem(spec, args.k, args.l, args.horizon, args.steps)
    )
    for r in results:
        direction = "+" if r.target[r.target.nonzero()[0][0]] > 0 else "-"
        print(
            f"  reach target {direction}: residual {r.residual:.3e}"
            f" {'(hit)' if r.hit else ''}"
        )

    witness = polar_falsifier(
        spec, args.k, args.l, attempts=args.attempts, seed=args.seed
    )
    if witness is None:
        print(f"  falsifier: no witness in {args.attempts} attempts")
    else:
        print(f"  falsifier: validated witness found: {witness.round(6)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
