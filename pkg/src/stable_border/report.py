"""Text and canonical-JSON rendering of results."""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .basis import BorderBasis, StabilityReport
from .bm import ExactPolynomialBasis
from .monomial import DEGLEX, PowerProduct, TermOrdering, format_term
from .soi import SOIResult


def render_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits,
    non-finite floats as ``null``.  Re-rendering parsed output reproduces it
    byte for byte."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {render_json(v, indent, _level + 1)}"
                 for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + render_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, PowerProduct):
        return json.dumps(format_term(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")


def soi_to_dict(r: SOIResult) -> dict:
    return {
        "order_ideal": [format_term(t) for t in r.order_ideal],
        "corners": [format_term(t) for t in r.corners],
        "quotient_basis": r.is_quotient_basis,
        "trace": [{"term": format_term(e.term), "e_hat_norm": e.e_hat_norm,
                   "threshold": e.threshold, "accepted": e.accepted} for e in r.trace],
    }


def _poly_entry(lead: PowerProduct, coeffs: dict) -> dict:
    return {"term": format_term(lead),
            "coefficients": {format_term(t): c for t, c in coeffs.items() if t != lead}}


def border_basis_to_dict(bb: BorderBasis) -> dict:
    return {
        "order_ideal": [format_term(t) for t in bb.order_ideal],
        "border": [format_term(b) for b in bb.border],
        "polynomials": [_poly_entry(b, bb.polynomial(j)) for j, b in enumerate(bb.border)],
    }


def bm_to_dict(g: ExactPolynomialBasis) -> dict:
    return {
        "order_ideal": [format_term(t) for t in g.order_ideal],
        "polynomials": [_poly_entry(p.leading_term, p.coefficients) for p in g.polynomials],
    }


def stability_to_dict(rep: StabilityReport, order_ideal, seed: int) -> dict:
    return {
        "order_ideal": [format_term(t) for t in order_ideal],
        "tolerance": list(rep.tolerance),
        "trials": rep.trials,
        "seed": seed,
        "min_singular_value": rep.min_singular_value,
        "median_singular_value": rep.median_singular_value,
        "failures": len(rep.failures),
        "verdict": rep.verdict,
    }


# -- text -------------------------------------------------------------------

def format_terms(terms) -> str:
    return "{" + ", ".join(format_term(t) for t in terms) + "}"


def _coef_str(c) -> str:
    return str(c) if isinstance(c, Fraction) else format(c, ".6g")


def format_polynomial(coeffs: dict, lead: PowerProduct | None = None,
                      ordering: TermOrdering = DEGLEX) -> str:
    """``lead`` first, then the other terms in descending term order,
    e.g. ``x^2 - 1/9*y^2 - 121/30*x + 9/10*y + 101/45``."""
    out = []
    terms = ordering.sorted((t for t in coeffs if t != lead), reverse=True)
    if lead is not None:
        terms.insert(0, lead)
    for t in terms:
        c = coeffs[t]
        if c == 0:
            continue
        neg = c < 0
        mag = -c if neg else c
        name = format_term(t)
        if t.degree == 0:
            body = _coef_str(mag)
        elif mag == 1:
            body = name
        else:
            body = f"{_coef_str(mag)}*{name}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out) if out else "0"


def soi_text(r: SOIResult, verbose: bool = False) -> str:
    lines = [f"O = {format_terms(r.order_ideal)}",
             f"corners = {format_terms(r.corners)}",
             f"quotient basis: {'yes' if r.is_quotient_basis else 'no'} (#O = {len(r.order_ideal)})"]
    if verbose:
        for e in r.trace:
            lines.append(f"  {format_term(e.term):>8}  |e_hat| = {e.e_hat_norm:.6g}  "
                         f"threshold = {e.threshold:.6g}  {'accept' if e.accepted else 'corner'}")
    return "\n".join(lines)


def border_basis_text(bb: BorderBasis) -> str:
    return "\n".join(format_polynomial(bb.polynomial(j), b) for j, b in enumerate(bb.border))


def bm_text(g: ExactPolynomialBasis) -> str:
    lines = [f"O_sigma = {format_terms(g.order_ideal)}"]
    lines += [format_polynomial(p.coefficients, p.leading_term) for p in g.polynomials]
    return "\n".join(lines)


def stability_text(rep: StabilityReport, order_ideal) -> str:
    return (f"O = {format_terms(order_ideal)}\n"
            f"trials = {rep.trials}, failures = {len(rep.failures)}\n"
            f"min sigma_min = {rep.min_singular_value:.6g}, median sigma_min = {rep.median_singular_value:.6g}\n"
            f"verdict: {rep.verdict}")
