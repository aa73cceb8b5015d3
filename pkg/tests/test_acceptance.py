"""End-to-end acceptance criteria; each test prints one PASS/FAIL line."""
import re
import time
from pathlib import Path

import numpy as np
import pytest

from stable_border.basis import border_basis, evaluation_matrix, verify_stability
from stable_border.bm import bm_quotient_basis
from stable_border.cli import EXIT_NOT_QUOTIENT_BASIS, main
from stable_border.folinalg import ls_first_order
from stable_border.monomial import format_term, is_order_ideal, parse_term
from stable_border.points import EmpiricalPointSet
from stable_border.soi import soi

from conftest import (ELLIPSE, HYPERBOLA, LINE, LINE_ALIGNED, circle_points, ls_truncation_errors,
                      random_ls_instance, terms)

pytestmark = pytest.mark.acceptance

DATA = Path(__file__).resolve().parent.parent / "data"

LINE_BASIS = [
    "x + 0.0002y^3 + 0.0012y^2 - 0.3328y - 0.6686",
    "xy + 0.0008y^3 - 0.3286y^2 - 0.6643y - 0.0079",
    "xy^2 - 0.3301y^3 - 0.6471y^2 + 0.0098y - 0.0326",
    "xy^3 - 0.0199y^3 - 7.1199y^2 - 7.3933y + 13.533",
    "y^4 + 1.9y^3 - 21.6y^2 - 22.3y + 41",
]
HYPERBOLA_BASIS = [
    "xy + 0.0047y^3 - 0.0560y^2 + 0.0280x + 0.2194y - 6.336",
    "x^2 - 0.4265y^3 + 6.118y^2 - 14.559x - 32.047y + 77.711",
    "xy^2 + 0.0114y^3 - 0.1372y^2 + 0.0686x - 5.463y - 0.8231",
    "y^4 - 14.477y^3 + 76.724y^2 - 14.862x - 188.419y + 214.345",
    "xy^3 + 0.0280y^3 - 6.336y^2 + 0.1680x + 1.316y - 2.016",
]
_MONO = re.compile(r"([+-])\s*(\d+(?:\.(\d+))?)\s*((?:[xy](?:\^\d+)?)*)")


def parse_printed(text):
    """``"xy + 0.0047y^3 - 6.336"`` -> (lead, {term: (value, tolerance)}).
    The tolerance is 5 units in the last displayed decimal, which allows
    for printed values that were truncated rather than rounded."""
    lead, rest = text.split(" ", 1)
    coeffs = {}
    for sign, num, frac, mono in _MONO.findall(rest):
        d = len(frac) if frac else 0
        coeffs[parse_term(mono or "1", 2)] = (float(sign + num), 5 * 10.0 ** -d)
    return parse_term(lead, 2), coeffs


def compare_printed(bb, printed):
    worst, ok = 0.0, True
    for text in printed:
        lead, coeffs = parse_printed(text)
        g = bb.polynomial(bb.border.index(lead))
        assert set(g) - {lead} <= set(coeffs)
        for t, (value, tol) in coeffs.items():
            err = abs(g.get(t, 0.0) - value)
            ok &= err <= tol
            worst = max(worst, err / tol)
    return ok, worst


def names(ts):
    return [format_term(t) for t in ts]


def test_c1_line_order_ideal(acceptance):
    X = EmpiricalPointSet(LINE, (0.15, 0.15))
    t0 = time.perf_counter()
    r = soi(X)
    dt = time.perf_counter() - t0
    ok = (names(r.order_ideal) == ["1", "y", "y^2", "y^3"]
          and set(r.corners) == set(terms("x y^4")) and dt < 1.0)
    assert acceptance("C1 line order ideal", ok,
                      f"O={names(r.order_ideal)} corners={names(r.corners)} {dt:.3f}s")


def test_c2_line_border_basis(acceptance):
    bb = border_basis(terms("1 y y^2 y^3"), LINE)
    ok_printed, worst = compare_printed(bb, LINE_BASIS)
    g = bb.polynomial(bb.border.index(parse_term("y^4", 2)))
    node = np.poly([-5, -2, 1, 4.1])[::-1]
    node_err = max(abs(g[parse_term(t, 2)] - c) for t, c in zip(["1", "y", "y^2", "y^3", "y^4"], node))
    ok = ok_printed and node_err <= 1e-10
    assert acceptance("C2 line border basis", ok,
                      f"worst err/tol={worst:.3f} node polynomial err={node_err:.1e}")


def test_c3_buchberger_moeller(acceptance):
    from fractions import Fraction as F
    g = bm_quotient_basis([("-1", "-5"), ("0", "-2"), ("1", "1"), ("2", "4.1")])
    got = {format_term(p.leading_term): {format_term(t): c for t, c in p.tail().items()}
           for p in g.polynomials}
    expected = {
        "x^2": {"y^2": F(-1, 9), "x": F(-121, 30), "y": F(9, 10), "1": F(101, 45)},
        "xy": {"y^2": F(-1, 3), "x": F(-41, 10), "y": F(7, 10), "1": F(41, 15)},
        "y^3": {"y^2": F(6), "x": F(516243, 100), "y": F(-171781, 100), "1": F(-172581, 50)},
    }
    ok = got == expected and names(g.order_ideal) == ["1", "y", "x", "y^2"]
    assert acceptance("C3 exact Buchberger-Moeller", ok, f"O_sigma={names(g.order_ideal)}")


def test_c4_instability(acceptance):
    sv = np.linalg.svd(evaluation_matrix(terms("1 y x y^2"), LINE_ALIGNED), compute_uv=False)
    X = EmpiricalPointSet(LINE, (0.15, 0.15))
    rep = verify_stability(terms("1 y y^2 y^3"), X, trials=1000, seed=0, sign_test=False)
    ok = sv[-1] < 1e-10 * sv[0] and rep.trials == 1000 and not rep.failures
    assert acceptance("C4 O1 singular, O2 stable", ok,
                      f"sigma_min/sigma_max={sv[-1] / sv[0]:.1e} O2 failures={len(rep.failures)}/1000")


def test_c5_ellipse(acceptance):
    X = EmpiricalPointSet(ELLIPSE, (0.1, 0.1))
    t0 = time.perf_counter()
    r = soi(X)
    bb = border_basis(r.order_ideal, ELLIPSE)
    dt = time.perf_counter() - t0
    lowest = min(bb.border, key=lambda t: (t.degree, bb.border.index(t)))
    g = bb.polynomial(bb.border.index(lowest))
    y2, one = parse_term("y^2", 2), parse_term("1", 2)
    rest = max(abs(c) for t, c in g.items() if t not in (lowest, y2, one))
    ok = (names(r.order_ideal) == ["1", "y", "x", "y^2", "xy", "y^3", "xy^2", "y^4", "xy^3", "xy^4"]
          and format_term(lowest) == "x^2"
          and abs(g[y2] - 0.273) <= 5e-3 and abs(g[one] + 25.250) <= 5e-3
          and rest < 0.11 and dt < 5.0)
    assert acceptance("C5 ellipse", ok,
                      f"lead={format_term(lowest)} y^2={g[y2]:.4f} 1={g[one]:.4f} max other={rest:.4f} {dt:.3f}s")


def test_c6_hyperbola(acceptance, capsys):
    r = soi(EmpiricalPointSet(HYPERBOLA, (0.25, 0.25)))
    status = main(["border-basis", str(DATA / "hyperbola.csv"), "--tolerance", "0.25,0.25"])
    out = capsys.readouterr().out
    r2 = soi(EmpiricalPointSet(HYPERBOLA, (0.2, 0.2)))
    bb = border_basis(r2.order_ideal, HYPERBOLA)
    ok_printed, worst = compare_printed(bb, HYPERBOLA_BASIS)
    ok = (names(r.order_ideal) == ["1", "y", "x", "y^2"] and not r.is_quotient_basis
          and status == EXIT_NOT_QUOTIENT_BASIS and "not a quotient basis (#O = 4 < 5)" in out
          and names(r2.order_ideal) == ["1", "y", "x", "y^2", "y^3"] and ok_printed)
    assert acceptance("C6 hyperbola", ok, f"exit={status} worst err/tol={worst:.3f}")


def test_c7_circle_pattern(acceptance):
    t0 = time.perf_counter()
    found = {}
    for s in (8, 16):
        r = soi(EmpiricalPointSet(circle_points(s, seed=0), (0.01, 0.01)))
        found[s] = sorted(names(r.corners))
    dt = time.perf_counter() - t0
    ok = (found[8] == ["x^2", "xy^3", "y^5"] and found[16] == ["x^2", "xy^7", "y^9"] and dt < 30)
    assert acceptance("C7 circle corner pattern", ok, f"8: {found[8]} 16: {found[16]} {dt:.2f}s")


def test_c8_first_order_oracle(acceptance):
    rng = np.random.default_rng(2024)
    h = 1e-3
    bad_ratio, bad_orth, checked_resid = 0, 0, 0
    lo, hi = np.inf, 0.0
    for _ in range(100):
        M, v = random_ls_instance(rng, max_s=8, max_n=3)
        r = ls_first_order(M, v)
        d = rng.normal(size=M.M1.shape[2])
        d /= np.linalg.norm(d)
        ex1, er1 = ls_truncation_errors(M, v, r, h * d)
        ex2, er2 = ls_truncation_errors(M, v, r, h / 2 * d)
        ratios = [ex1 / ex2]
        # with k = s the residual vanishes identically; its error is pure roundoff
        if M.M0.shape[1] < M.M0.shape[0]:
            ratios.append(er1 / er2)
            checked_resid += 1
        for q in ratios:
            lo, hi = min(lo, q), max(hi, q)
            bad_ratio += not 3.5 <= q <= 4.5
        scale = max(np.linalg.norm(M.M0), np.linalg.norm(M.M1)) * max(np.linalg.norm(v.v0), np.linalg.norm(v.v1))
        lin = np.einsum("ikn,i->kn", M.M1, r.rho0) + M.M0.T @ r.rho1
        bad_orth += (np.linalg.norm(M.M0.T @ r.rho0) > 1e-10 * scale or np.linalg.norm(lin) > 1e-10 * scale)
    ok = bad_ratio == 0 and bad_orth == 0
    assert acceptance("C8 first-order oracle", ok,
                      f"ratios in [{lo:.3f}, {hi:.3f}] ({checked_resid} residual checks) "
                      f"orthogonality failures={bad_orth}")


def test_c9_structural_invariants(acceptance):
    from scipy.spatial.distance import pdist
    rng = np.random.default_rng(99)
    violations, full, worst = 0, 0, 0.0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        s = int(rng.integers(1, 11))
        P = rng.uniform(-2, 2, (s, n))
        dmin = pdist(P).min() if s > 1 else 1.0
        eps = dmin / 3 * rng.uniform(0.01, 1) * rng.uniform(0.5, 1, n)
        r = soi(EmpiricalPointSet(P, eps))
        violations += not is_order_ideal(r.order_ideal) or r.accepted_count > s - 1
        if len(r.order_ideal) == s:
            full += 1
            bb = border_basis(r.order_ideal, P)
            M = evaluation_matrix(bb.order_ideal, P)
            B = evaluation_matrix(bb.border, P)
            res = np.linalg.norm(bb.residuals(P), axis=0)
            scale = np.linalg.norm(B, axis=0) + np.linalg.norm(M, 2) * np.linalg.norm(bb.coefficients, axis=0)
            worst = max(worst, float(np.max(res / scale)))
    ok = violations == 0 and worst <= 1e-9
    assert acceptance("C9 structural invariants", ok,
                      f"violations={violations} quotient bases={full}/200 worst relative residual={worst:.1e}")
