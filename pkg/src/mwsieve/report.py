"""Rendering verdicts and scans as JSON, text, CSV and figures.

The verdict JSON layout is fixed by ``VERDICT_SCHEMA`` (JSON Schema, draft 2020-12).
Everything except the ``timings`` object is deterministic for fixed input,
seed and thread count.
"""

from __future__ import annotations

import csv
from pathlib import Path

SCHEMA_ID = "mwsieve.verdict/1"
CSV_FIELDS = ["prime", "kind", "order", "image_size", "n_0", "n_1", "n_2", "n_3"]

_int_list = {"type": "array", "items": {"type": "integer"}}
_stage = {
    "type": "object",
    "required": ["stage", "q", "modulus", "size", "chain_shape"],
    "properties": {
        "stage": {"type": "integer", "minimum": 0},
        "q": {"type": ["integer", "null"]},
        "modulus": {"type": "integer", "minimum": 1},
        "size": {"type": "integer", "minimum": 0},
        "chain_shape": _int_list,
    },
}

VERDICT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": SCHEMA_ID,
    "type": "object",
    "required": ["schema", "verdict", "reason", "modulus", "survivors", "curve", "gamma", "params", "provenance"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "verdict": {"enum": ["PROVEN_EMPTY", "SURVIVORS", "INCONCLUSIVE"]},
        "reason": {"type": "string"},
        "modulus": {"type": ["integer", "null"]},
        "survivors": {"type": "array", "items": _int_list},
        "curve": {"type": "object", "required": ["f"], "properties": {"f": _int_list}},
        "gamma": {
            "type": "object",
            "required": ["rank", "torsion"],
            "properties": {"rank": {"type": "integer", "minimum": 0}, "torsion": _int_list},
        },
        "params": {"type": "object"},
        "provenance": {
            "type": "object",
            "required": ["primes_used", "primes_skipped", "bad_primes", "q_sequence", "stages", "attempts", "early_contradiction", "timings"],
            "properties": {
                "primes_used": _int_list,
                "primes_skipped": {
                    "type": "array",
                    "items": {"type": "object", "required": ["p", "reason"], "properties": {"p": {"type": "integer"}, "reason": {"type": "string"}}},
                },
                "bad_primes": _int_list,
                "unfactored_discriminant_part": {"type": ["integer", "null"]},
                "q_sequence": _int_list,
                "stages": {"type": "array", "items": _stage},
                "attempts": {"type": "array", "minItems": 1, "items": {"type": "object", "required": ["eps", "eps1", "scan_stop", "outcome"]}},
                "early_contradiction": {
                    "oneOf": [
                        {"type": "null"},
                        {"type": "object", "required": ["prime", "group_order"], "properties": {"prime": {"type": "integer"}, "group_order": {"type": "integer"}}},
                    ]
                },
                "timings": {"type": "object", "additionalProperties": {"type": "number"}},
            },
        },
    },
    "allOf": [
        {
            "if": {"properties": {"verdict": {"const": "PROVEN_EMPTY"}}},
            "then": {"properties": {"survivors": {"maxItems": 0}}},
        }
    ],
}


def verdict_json(verdict, doc, params) -> dict:
    return {
        "schema": SCHEMA_ID,
        "verdict": verdict.kind,
        "reason": verdict.reason,
        "modulus": verdict.modulus,
        "survivors": [list(v) for v in verdict.survivors],
        "curve": {"f": list(doc.f)},
        "gamma": {"rank": doc.rank, "torsion": list(doc.torsion)},
        "params": {
            "smooth_bound": params.smooth_bound,
            "eps": str(params.eps),
            "eps1": str(params.eps1),
            "max_prime": params.max_prime,
            "max_constraints": params.max_constraints,
            "max_set_size": params.max_set_size,
            "retry_cap": params.retry_cap,
            "threads": params.threads,
            "seed": params.seed,
        },
        "provenance": verdict.provenance,
    }


def strip_timings(payload: dict) -> dict:
    """Copy of a verdict payload without wall-clock fields, for comparisons."""
    out = dict(payload)
    prov = dict(out.get("provenance", {}))
    prov.pop("timings", None)
    out["provenance"] = prov
    return out


def _gamma_text(g: dict) -> str:
    parts = [f"Z^{g['rank']}"] if g["rank"] else []
    parts += [f"Z/{t}" for t in g["torsion"]]
    return " x ".join(parts) or "0"


def verdict_text(payload: dict) -> str:
    prov = payload["provenance"]
    lines = [
        f"verdict: {payload['verdict']}",
        f"reason:  {payload['reason']}",
        f"curve:   y^2 = F(X, Z), f = {payload['curve']['f']}",
        f"Gamma:   {_gamma_text(payload['gamma'])}",
        f"primes:  {len(prov['primes_used'])} used, {len(prov['primes_skipped'])} skipped",
    ]
    if prov["early_contradiction"]:
        ec = prov["early_contradiction"]
        lines.append(f"early contradiction at p = {ec['prime']} (#G_p = {ec['group_order']})")
    if prov["q_sequence"]:
        lines.append(f"q-sequence: {' '.join(map(str, prov['q_sequence']))}")
        lines.append("stage sizes: " + " ".join(str(s["size"]) for s in prov["stages"]))
    if payload["verdict"] == "SURVIVORS":
        shown = payload["survivors"][:10]
        more = len(payload["survivors"]) - len(shown)
        lines.append(f"survivors mod {payload['modulus']}: {shown}" + (f" ... (+{more})" if more > 0 else ""))
    lines.append(f"attempts: {len(prov['attempts'])}, time {prov['timings'].get('total', 0):.2f} s")
    return "\n".join(lines)


def scan_json(rep, seconds: float) -> dict:
    return {
        "stop_reason": rep.stop_reason,
        "modulus": None if rep.modulus is None else rep.modulus.value,
        "last_prime": rep.last_prime,
        "primes_used": [c.p for c in rep.constraints],
        "primes_skipped": [{"p": s.p, "reason": s.reason} for s in rep.skipped],
        "rows": rep.csv_rows(),
        "timings": {"total": seconds},
    }


def scan_text(payload: dict) -> str:
    lines = [
        f"scan stopped: {payload['stop_reason']} at p = {payload['last_prime']}",
        f"constraints: {len(payload['primes_used'])}, skipped primes: {len(payload['primes_skipped'])}",
        f"candidate modulus: {payload['modulus']}",
    ]
    if payload["rows"]:
        last = payload["rows"][-1]
        lines.append("last n-values: " + ", ".join(f"n_{j}={last[f'n_{j}'] or '-'}" for j in range(4)))
    return "\n".join(lines)


def write_csv(rows, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return path


def write_figures(directory, rows=None, stages=None, samples=None, eps=None) -> list[Path]:
    from . import plotting

    directory = Path(directory)
    out = []
    if rows:
        out.append(plotting.plot_scan(rows, directory / "expected_sizes.png", eps))
    if stages:
        out.append(plotting.plot_stages(stages, directory / "sieve_stages.png"))
    if samples:
        out.append(plotting.plot_model(samples, directory / "random_model.png"))
    return out
