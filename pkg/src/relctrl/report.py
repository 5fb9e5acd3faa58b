"""Rendering of analysis reports as text tables or versioned JSON."""

from __future__ import annotations

import json

import numpy as np

from .controllability import AnalysisReport, EigGraphVerdict

REPORT_VERSION = 1

# jsonschema document for the JSON rendering below; kept alongside the
# renderer so the two cannot drift apart silently.
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "report_version",
        "name",
        "n",
        "q",
        "p",
        "tolerances",
        "validation",
        "spectrum",
        "graphs",
        "controllability_matrix",
        "index_recursion",
        "verdicts",
        "assumptions",
        "caveats",
    ],
    "additionalProperties": False,
    "properties": {
        "report_version": {"const": REPORT_VERSION},
        "name": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "q": {"type": "integer", "minimum": 2},
        "p": {"type": "integer", "minimum": 1},
        "tolerances": {
            "type": "object",
            "required": ["rank", "cone", "eig", "zero"],
            "additionalProperties": False,
            "properties": {
                "rank": {"type": "number"},
                "cone": {"type": "number"},
                "eig": {"type": "number"},
                "zero": {"type": "number"},
            },
        },
        "validation": {
            "type": "object",
            "required": ["ok", "violations"],
            "additionalProperties": False,
            "properties": {
                "ok": {"type": "boolean"},
                "violations": {"type": "array"},
            },
        },
        "spectrum": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kappa", "mu", "alg_mult", "geo_mult", "is_real"],
                "additionalProperties": False,
                "properties": {
                    "kappa": {"type": "integer"},
                    "mu": {"$ref": "#/$defs/complex"},
                    "alg_mult": {"type": "integer"},
                    "geo_mult": {"type": "integer"},
                    "is_real": {"type": "boolean"},
                },
            },
        },
        "graphs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kappa", "mu", "kind", "marginal"],
                "additionalProperties": False,
                "properties": {
                    "kappa": {"type": "integer"},
                    "mu": {"$ref": "#/$defs/complex"},
                    "kind": {"enum": ["V", "W", "Q"]},
                    "connected": {"type": ["boolean", "null"]},
                    "strongly_connected": {"type": ["boolean", "null"]},
                    "kl_connected": {"type": ["object", "null"]},
                    "strongly_kl_connected": {"type": ["object", "null"]},
                    "marginal": {"type": "boolean"},
                },
            },
        },
        "controllability_matrix": {
            "type": "object",
            "required": ["connected", "kl_connected"],
            "additionalProperties": False,
            "properties": {
                "connected": {"type": "boolean"},
                "kl_connected": {"type": "object"},
            },
        },
        "index_recursion": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kappa", "mu", "index_set", "removed", "lineality_dim"],
                "additionalProperties": False,
                "properties": {
                    "kappa": {"type": "integer"},
                    "mu": {"$ref": "#/$defs/complex"},
                    "index_set": {"type": "array", "items": {"type": "integer"}},
                    "removed": {"type": "array", "items": {"type": "integer"}},
                    "lineality_dim": {"type": ["integer", "null"]},
                },
            },
        },
        "verdicts": {
            "type": "object",
            "required": [
                "controllable",
                "positively_controllable",
                "pairwise",
                "positive_pairwise",
            ],
            "additionalProperties": False,
            "properties": {
                "controllable": {"type": "boolean"},
                "positively_controllable": {"type": "boolean"},
                "pairwise": {"type": "object"},
                "positive_pairwise": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "required": ["yes", "conditional"],
                        "additionalProperties": False,
                        "properties": {
                            "yes": {"type": "boolean"},
                            "conditional": {"type": "boolean"},
                        },
                    },
                },
            },
        },
        "assumptions": {
            "type": "object",
            "required": ["eigen_overlap", "reach_closure"],
            "additionalProperties": False,
            "properties": {
                "eigen_overlap": {
                    "type": "object",
                    "required": ["holds", "violated_at"],
                    "additionalProperties": False,
                    "properties": {
                        "holds": {"type": "boolean"},
                        "violated_at": {"type": "array", "items": {"type": "integer"}},
                    },
                },
                "reach_closure": {"enum": ["structurally_verified", "unverified"]},
            },
        },
        "caveats": {"type": "array", "items": {"type": "string"}},
    },
    "$defs": {
        "complex": {
            "type": "object",
            "required": ["re", "im"],
            "additionalProperties": False,
            "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
        }
    },
}


def _complex_json(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _pair_key(pair: tuple[int, int]) -> str:
    return f"{pair[0]}-{pair[1]}"


def format_mu(mu: complex) -> str:
    """Eigenvalue with 9 significant digits, compact for real values."""
    if mu.imag == 0.0:
        return f"{mu.real:.9g}"
    return f"{mu.real:.9g}{mu.imag:+.9g}j"


def _graph_json(v: EigGraphVerdict) -> dict:
    def pairmap(d):
        if d is None:
            return None
        return {_pair_key(pair): bool(val) for pair, val in d.items()}

    return {
        "kappa": v.kappa,
        "mu": _complex_json(v.mu),
        "kind": v.graph_kind,
        "connected": v.connected,
        "strongly_connected": v.strongly_connected,
        "kl_connected": pairmap(v.kl_connected),
        "strongly_kl_connected": pairmap(v.strongly_kl_connected),
        "marginal": v.marginal,
    }


def report_to_dict(report: AnalysisReport) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "name": report.name,
        "n": report.n,
        "q": report.q,
        "p": report.p,
        "tolerances": {
            "rank": report.tolerances.rank,
            "cone": report.tolerances.cone,
            "eig": report.tolerances.eig,
            "zero": report.tolerances.zero,
        },
        "validation": {
            "ok": report.validation.ok,
            "violations": [
                {"kind": v.kind, "location": v.location, "magnitude": v.magnitude}
                for v in report.validation.violations
            ],
        },
        "spectrum": [
            {
                "kappa": i + 1,
                "mu": _complex_json(c.mu),
                "alg_mult": c.alg_mult,
                "geo_mult": c.geo_mult,
                "is_real": c.is_real,
            }
            for i, c in enumerate(report.spectrum.components)
        ],
        "graphs": [_graph_json(v) for v in report.graph_verdicts],
        "controllability_matrix": {
            "connected": report.w_matrix.connected,
            "kl_connected": {
                _pair_key(pair): val for pair, val in report.w_matrix.kl_connected.items()
            },
        },
        "index_recursion": [
            {
                "kappa": step.kappa,
                "mu": _complex_json(step.mu),
                "index_set": list(step.index_set),
                "removed": list(step.removed),
                "lineality_dim": step.lineality_dim,
            }
            for step in report.index_trace.steps
        ],
        "verdicts": {
            "controllable": report.controllable,
            "positively_controllable": report.positively_controllable,
            "pairwise": {_pair_key(p): v for p, v in report.pairwise.items()},
            "positive_pairwise": {
                _pair_key(p): {"yes": v.yes, "conditional": v.conditional}
                for p, v in report.positive_pairwise.items()
            },
        },
        "assumptions": {
            "eigen_overlap": {
                "holds": report.assumption_eigen.holds,
                "violated_at": list(report.assumption_eigen.violated_at),
            },
            "reach_closure": (
                "structurally_verified" if report.assumption_closed else "unverified"
            ),
        },
        "caveats": list(report.caveats),
    }


def render_json(report: AnalysisReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def _flag(value: bool | None, yes="yes", no="NO") -> str:
    if value is None:
        return "-"
    return yes if value else no


def render_text(report: AnalysisReport) -> str:
    pairs = list(report.pairwise)
    lines = []
    title = report.name or "array"
    lines.append(f"array: {title}   n={report.n} q={report.q} p={report.p}")
    lines.append("validation: ok")
    lines.append("")

    mu_width = max(
        [12] + [len(format_mu(c.mu)) + 2 for c in report.spectrum.components]
    )
    lines.append("spectrum:")
    for i, comp in enumerate(report.spectrum.components):
        lines.append(
            f"  k={i + 1:<3d} mu={format_mu(comp.mu):<{mu_width}s} "
            f"alg={comp.alg_mult} geo={comp.geo_mult}"
        )
    lines.append("")

    header = f"  {'k':<4s}{'mu':<{mu_width}s}{'V conn':<8s}{'V strong':<10s}"
    for pair in pairs:
        header += f"{'V ' + _pair_key(pair):<9s}"
    for pair in pairs:
        header += f"{'W ' + _pair_key(pair):<9s}"
    for pair in pairs:
        header += f"{'Q pos ' + _pair_key(pair):<13s}"
    lines.append("per-eigenvalue graphs:")
    lines.append(header)

    by_kind = {"V": {}, "W": {}, "Q": {}}
    for v in report.graph_verdicts:
        by_kind[v.graph_kind][v.kappa] = v
    for i, comp in enumerate(report.spectrum.components):
        kappa = i + 1
        vrow = by_kind["V"][kappa]
        wrow = by_kind["W"][kappa]
        qrow = by_kind["Q"][kappa]
        line = f"  {kappa:<4d}{format_mu(comp.mu):<{mu_width}s}"
        line += f"{_flag(vrow.connected, 'conn', 'NOT'):<8s}"
        line += f"{_flag(vrow.strongly_connected, 'strong', 'NOT'):<10s}"
        for pair in pairs:
            line += f"{_flag((vrow.kl_connected or {}).get(pair)):<9s}"
        for pair in pairs:
            line += f"{_flag((wrow.kl_connected or {}).get(pair)):<9s}"
        for pair in pairs:
            if comp.is_real:
                val = (qrow.strongly_kl_connected or {}).get(pair)
            else:
                val = (qrow.kl_connected or {}).get(pair)
            flag = _flag(val)
            if qrow.marginal:
                flag += "*"
            line += f"{flag:<13s}"
        lines.append(line)
    lines.append("")

    lines.append("verdicts:")
    lines.append(f"  controllable: {_flag(report.controllable, 'YES', 'NO')}")
    lines.append(
        f"  positively controllable: {_flag(report.positively_controllable, 'YES', 'NO')}"
    )
    for pair in pairs:
        lines.append(
            f"  ({pair[0]},{pair[1]})-controllable: {_flag(report.pairwise[pair], 'YES', 'NO')}"
        )
    for pair in pairs:
        verdict = report.positive_pairwise[pair]
        suffix = " (conditional)" if verdict.conditional else ""
        lines.append(
            f"  positive ({pair[0]},{pair[1]})-controllable: "
            f"{_flag(verdict.yes, 'YES', 'NO')}{suffix}"
        )
    lines.append("")

    eigen = report.assumption_eigen
    eigen_text = (
        "holds"
        if eigen.holds
        else "violated at k=" + ",".join(str(k) for k in eigen.violated_at)
    )
    closure_text = "structurally verified" if report.assumption_closed else "unverified"
    lines.append("assumptions:")
    lines.append(f"  eigen overlap: {eigen_text}")
    lines.append(f"  reach closure: {closure_text}")

    if report.index_trace.steps and any(
        step.lineality_dim is not None for step in report.index_trace.steps
    ):
        lines.append("")
        lines.append("input index recursion:")
        for step in report.index_trace.steps:
            sets = "{" + ",".join(str(s) for s in step.index_set) + "}"
            removed = "{" + ",".join(str(s) for s in step.removed) + "}"
            dim = "-" if step.lineality_dim is None else str(step.lineality_dim)
            lines.append(
                f"  k={step.kappa}: active={sets} removed={removed} lineality dim={dim}"
            )

    if report.caveats:
        lines.append("")
        lines.append("caveats:")
        for caveat in report.caveats:
            lines.append(f"  - {caveat}")
    return "\n".join(lines) + "\n"
