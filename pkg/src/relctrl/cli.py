"""Command-line front end.

Usage:
    relctrl analyze spec.json [--pair K L ...] [--json] [--dot DIR] [--tol-* X]
    relctrl examples NAME [--out PATH]
    relctrl oracle spec.json [--pair K L ...] [--samples N] [--horizon T]
                             [--steps M] [--seed S] [--json]

Vertex and input indices are 1-based everywhere.  Exit codes: 0 success,
1 parse or validation error, 2 numerical failure, 3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .array_model import validate_array
from .config import DEFAULT_TOLERANCES, Tolerances
from .controllability import analyze
from .corpus import build_example
from .errors import (
    AnalysisError,
    DimensionError,
    GraphDomainError,
    SpecFormatError,
)
from .gengraph import detect_scalar_edges, to_dot
from .oracles import (
    OracleVerdict,
    brammer_positive,
    kalman_reduced,
    make_reach_problem,
    pairwise_range,
    path_oracle,
    polar_falsifier,
    reach_simulator,
)
from .report import render_json, render_text
from .specio import load_spec, save_spec

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_DISAGREEMENT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relctrl",
        description=(
            "Decide controllability, positive controllability and their pairwise "
            "variants for arrays of identical systems under relative actuation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tolerance_flags(p):
        p.add_argument("--tol-rank", type=float, default=None, metavar="X")
        p.add_argument("--tol-cone", type=float, default=None, metavar="X")
        p.add_argument("--tol-eig", type=float, default=None, metavar="X")
        p.add_argument("--tol-zero", type=float, default=None, metavar="X")

    pa = sub.add_parser("analyze", help="run the four graph analyses on a spec file")
    pa.add_argument("path", type=Path)
    pa.add_argument(
        "--pair",
        nargs=2,
        type=int,
        action="append",
        default=[],
        metavar=("K", "L"),
        help="vertex pair for the pairwise verdicts (repeatable, 1-based)",
    )
    pa.add_argument("--json", action="store_true", help="emit the JSON report")
    pa.add_argument("--dot", type=Path, default=None, metavar="DIR",
                    help="write one DOT file per scalar-edge graph")
    add_tolerance_flags(pa)
    pa.set_defaults(func=cmd_analyze)

    pe = sub.add_parser("examples", help="write a bundled example spec file")
    pe.add_argument("name")
    pe.add_argument("--out", type=Path, default=None, metavar="PATH")
    pe.set_defaults(func=cmd_examples)

    po = sub.add_parser("oracle", help="cross-check the analyses with brute-force oracles")
    po.add_argument("path", type=Path)
    po.add_argument("--pair", nargs=2, type=int, action="append", default=[],
                    metavar=("K", "L"))
    po.add_argument("--samples", type=int, default=50,
                    help="random restarts for the polar falsifier (default 50)")
    po.add_argument("--horizon", type=float, default=5.0,
                    help="reach-simulator time horizon (default 5)")
    po.add_argument("--steps", type=int, default=60,
                    help="reach-simulator input intervals (default 60)")
    po.add_argument("--seed", type=int, default=0)
    po.add_argument("--json", action="store_true")
    add_tolerance_flags(po)
    po.set_defaults(func=cmd_oracle)
    return parser


def _tolerances(args, file_tolerances: Tolerances | None) -> Tolerances:
    # Precedence: command-line flag, then spec file, then defaults.
    base = file_tolerances or DEFAULT_TOLERANCES
    return base.override(
        rank=args.tol_rank, cone=args.tol_cone, eig=args.tol_eig, zero=args.tol_zero
    )


def _load(args) -> tuple:
    spec, file_tol = load_spec(args.path)
    tol = _tolerances(args, file_tol)
    report = validate_array(spec, tol.zero)
    if not report.ok:
        for v in report.violations:
            print(
                f"validation: {v.kind} at {v.location} (magnitude {v.magnitude:g})",
                file=sys.stderr,
            )
        raise SpecFormatError(f"{args.path}: array spec failed validation")
    return spec, tol


def _write_dot_files(spec, report, directory: Path) -> None:
    from .controllability import q_graphs_and_index_sets, v_graphs, w_graphs

    directory.mkdir(parents=True, exist_ok=True)
    tol = report.tolerances
    spectrum = report.spectrum
    stem = report.name or "array"
    graph_lists = {
        "v": v_graphs(spec, spectrum, tol.zero),
        "w": w_graphs(spec, spectrum, tol.zero),
        "q": q_graphs_and_index_sets(spec, spectrum, tol)[0],
    }
    for kind, graphs in graph_lists.items():
        for kappa, G in enumerate(graphs, start=1):
            if detect_scalar_edges(G, tol.zero) is None:
                continue
            path = directory / f"{stem}_{kind}_k{kappa}.dot"
            path.write_text(to_dot(G))


def cmd_analyze(args) -> int:
    spec, tol = _load(args)
    report = analyze(spec, pairs=[tuple(p) for p in args.pair], tolerances=tol)
    if args.dot is not None:
        _write_dot_files(spec, report, args.dot)
    sys.stdout.write(render_json(report) if args.json else render_text(report))
    return EXIT_OK


def cmd_examples(args) -> int:
    try:
        spec = build_example(args.name)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_INPUT
    out = args.out or Path(f"{args.name}.json")
    save_spec(spec, out)
    print(f"wrote {out}")
    return EXIT_OK


def _bool_word(flag: bool) -> str:
    return "yes" if flag else "no"


def _run_oracles(spec, tol, pairs, samples, horizon, steps, seed) -> list[OracleVerdict]:
    report = analyze(spec, pairs=pairs, tolerances=tol)
    verdicts: list[OracleVerdict] = []

    kalman = kalman_reduced(spec, tol.rank)
    verdicts.append(
        OracleVerdict(
            name="kalman_reduced",
            agrees=kalman == report.controllable,
            detail=f"rank test {_bool_word(kalman)}, analysis {_bool_word(report.controllable)}",
        )
    )
    brammer = brammer_positive(spec, tol)
    verdicts.append(
        OracleVerdict(
            name="brammer_positive",
            agrees=brammer == report.positively_controllable,
            detail=(
                f"cone test {_bool_word(brammer)}, analysis "
                f"{_bool_word(report.positively_controllable)}"
            ),
        )
    )

    if spec.n == 1:
        try:
            for kind, expected in (
                ("connected", report.controllable),
                ("strong", report.positively_controllable),
            ):
                walked = path_oracle(spec.incidence, kind)
                verdicts.append(
                    OracleVerdict(
                        name=f"path_{kind}",
                        agrees=walked == expected,
                        detail=f"walk {_bool_word(walked)}, analysis {_bool_word(expected)}",
                    )
                )
        except GraphDomainError:
            pass   # inputs are not literal unit edges; inapplicable

    for pair in pairs:
        k, l = pair
        ranged = pairwise_range(spec, k, l, tol.rank)
        verdicts.append(
            OracleVerdict(
                name=f"pairwise_range_{k}_{l}",
                agrees=ranged == report.pairwise[pair],
                detail=(
                    f"range test {_bool_word(ranged)}, analysis "
                    f"{_bool_word(report.pairwise[pair])}"
                ),
            )
        )

        positive = report.positive_pairwise[pair]
        witness = polar_falsifier(spec, k, l, attempts=samples, seed=seed)
        if witness is None:
            verdicts.append(
                OracleVerdict(
                    name=f"polar_falsifier_{k}_{l}",
                    agrees=None,
                    detail=f"no witness in {samples} attempts (proves nothing)",
                )
            )
        else:
            verdicts.append(
                OracleVerdict(
                    name=f"polar_falsifier_{k}_{l}",
                    agrees=not positive.yes,
                    detail=(
                        "validated witness refutes positive steering; analysis "
                        f"{_bool_word(positive.yes)}"
                    ),
                    witness=witness,
                )
            )

        if positive.yes:
            results = reach_simulator(make_reach_problem(spec, k, l, horizon, steps))
            worst = max(r.residual for r in results)
            all_hit = all(r.hit for r in results)
            verdicts.append(
                OracleVerdict(
                    name=f"reach_simulator_{k}_{l}",
                    agrees=True if all_hit else None,
                    detail=(
                        f"worst target residual {worst:.3e} over {len(results)} targets "
                        "(evidence only)"
                    ),
                )
            )
    return verdicts


def cmd_oracle(args) -> int:
    spec, tol = _load(args)
    pairs = [tuple(p) for p in args.pair]
    verdicts = _run_oracles(
        spec, tol, pairs, args.samples, args.horizon, args.steps, args.seed
    )
    if args.json:
        payload = [
            {
                "name": v.name,
                "agrees": v.agrees,
                "detail": v.detail,
                "witness": None if v.witness is None else list(np.round(v.witness, 12)),
            }
            for v in verdicts
        ]
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for v in verdicts:
            mark = "?" if v.agrees is None else ("ok" if v.agrees else "DISAGREES")
            sys.stdout.write(f"{v.name:<24s} {mark:<10s} {v.detail}\n")
    if any(v.agrees is False for v in verdicts):
        return EXIT_DISAGREEMENT
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecFormatError, DimensionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AnalysisError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
