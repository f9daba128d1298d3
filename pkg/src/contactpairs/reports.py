"""Report rendering: canonical JSON (machine) and plain text (human).

The JSON form uses sorted keys, two-space indent, rationals as strings, and
ends with a newline; re-serializing a parsed report is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .foliations import FoliationReport, ScaledForm, VolumeIdentity
from .forms import Vector
from .liealg import Distribution


def frac_str(x: Fraction) -> str:
    return str(x)


def vec_coeffs(v: Vector) -> list[str]:
    return [str(c) for c in v.coeffs]


def vec_pretty(v: Vector, frame: Sequence[str]) -> str:
    parts = []
    for i, c in enumerate(v.coeffs):
        if c == 0:
            continue
        if c == 1:
            parts.append(("+", frame[i]))
        elif c == -1:
            parts.append(("-", frame[i]))
        else:
            parts.append(("-" if c < 0 else "+", f"{abs(c)} {frame[i]}"))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def vector_json(v: Vector, frame: Sequence[str]) -> dict:
    return {"coeffs": vec_coeffs(v), "pretty": vec_pretty(v, frame)}


def distribution_json(D: Distribution, frame: Sequence[str]) -> dict:
    return {
        "dim": D.dim,
        "basis": [vec_coeffs(v) for v in D.basis],
        "pretty": D.render(frame),
    }


def scaled_form_pretty(chi: ScaledForm, coframe: Sequence[str]) -> str:
    exact = chi.exact_form()
    if exact is not None:
        return exact.render(coframe)
    return f"sqrt({chi.scale_sq}) * ({chi.base.render(coframe)})"


def foliation_json(rep: FoliationReport, frame: Sequence[str], coframe: Sequence[str]) -> dict:
    return {
        "name": rep.name,
        "dim": rep.dim,
        "mean_curvature": vector_json(rep.mean_curvature, frame),
        "minimal": rep.minimal,
        "totally_geodesic": rep.totally_geodesic,
        "totally_geodesic_witness": (
            None
            if rep.tg_witness is None
            else [rep.tg_witness[0], rep.tg_witness[1]]
        ),
        "rummler_minimal": rep.rummler_minimal,
        "rummler_witness": rep.rummler_witness,
        "characteristic_form": scaled_form_pretty(rep.characteristic, coframe),
        "oracles_agree": rep.oracles_agree,
    }


def volume_json(v: VolumeIdentity) -> dict:
    return {
        "det_g": str(v.lhs_sq),
        "constant": str(v.constant),
        "rhs_coefficient": str(v.rhs_coeff),
        "ok": v.ok,
    }


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _text_lines(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        for k in value:
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.extend(_text_lines(v, indent))
                lines.append("")
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(f"{pad}{_scalar_text(value)}")
    return lines


def _scalar_text(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list) and not v:
        return "[]"
    if isinstance(v, dict) and not v:
        return "{}"
    return str(v)


def render_text(report: dict) -> str:
    """Human-readable rendering with checks as one [ok]/[FAIL] line each."""
    lines: list[str] = []
    header_keys = ["command", "instance", "kappa", "tolerance"]
    for k in header_keys:
        if k in report:
            lines.append(f"{k}: {_scalar_text(report[k])}")
    for k, v in report.items():
        if k in header_keys or k in ("checks", "ok"):
            continue
        if isinstance(v, (dict, list)) and v:
            lines.append(f"{k}:")
            lines.extend(_text_lines(v, 1))
        else:
            lines.append(f"{k}: {_scalar_text(v)}")
    for c in report.get("checks", []):
        mark = "[ok]  " if c["ok"] else "[FAIL]"
        detail = f" -- {c['detail']}" if c.get("detail") else ""
        lines.append(f"{mark} {c['name']}{detail}")
    if "ok" in report:
        lines.append(f"result: {'PASS' if report['ok'] else 'FAIL'}")
    return "\n".join(lines) + "\n"
