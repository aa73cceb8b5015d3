"""Exact Buchberger-Moeller algorithm over the rationals.

Computes the reduced Groebner basis of the vanishing ideal of a finite
point set together with its quotient basis (the standard monomials),
using exact ``Fraction`` Gaussian elimination on evaluation vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .monomial import DEGLEX, PowerProduct, TermOrdering
from .points import rational_rows


@dataclass(frozen=True)
class ExactPolynomial:
    leading_term: PowerProduct
    coefficients: dict  # PowerProduct -> Fraction, leading term included with 1

    def __call__(self, point) -> Fraction:
        return sum((c * t(point) for t, c in self.coefficients.items()), Fraction(0))

    def tail(self) -> dict:
        return {t: c for t, c in self.coefficients.items() if t != self.leading_term}


@dataclass(frozen=True)
class ExactPolynomialBasis:
    polynomials: tuple[ExactPolynomial, ...]
    order_ideal: tuple[PowerProduct, ...]

    @property
    def leading_terms(self) -> tuple[PowerProduct, ...]:
        return tuple(g.leading_term for g in self.polynomials)


def bm_quotient_basis(points: Sequence[Sequence], ordering: TermOrdering = DEGLEX) -> ExactPolynomialBasis:
    pts = rational_rows(points)
    if not pts:
        raise ValueError("no points")
    if len(set(pts)) != len(pts):
        dup = next((i, j) for i in range(len(pts)) for j in range(i) if pts[i] == pts[j])
        raise ValueError(f"duplicate points {dup[1]} and {dup[0]}")
    n = len(pts[0])

    # rows of the echelon form: (pivot, reduced vector, combination) where the
    # combination (dict term -> coeff) evaluates to the reduced vector
    rows: list[tuple[int, list[Fraction], dict]] = []
    order_ideal: list[PowerProduct] = []
    basis: list[ExactPolynomial] = []
    candidates = [PowerProduct.one(n)]

    while candidates:
        candidates.sort(key=ordering.key)
        t = candidates.pop(0)
        if any(g.leading_term.divides(t) for g in basis):
            continue
        vec = [Fraction(t(p)) for p in pts]
        comb = {t: Fraction(1)}
        for pivot, rvec, rcomb in rows:
            f = vec[pivot]
            if f:
                vec = [a - f * b for a, b in zip(vec, rvec)]
                for u, c in rcomb.items():
                    comb[u] = comb.get(u, Fraction(0)) - f * c
        pivot = next((i for i, a in enumerate(vec) if a), None)
        if pivot is None:
            coeffs = {u: c for u, c in comb.items() if c}
            basis.append(ExactPolynomial(t, coeffs))
            continue
        scale = vec[pivot]
        rows.append((pivot, [a / scale for a in vec], {u: c / scale for u, c in comb.items()}))
        order_ideal.append(t)
        for i in range(n):
            u = t.times_var(i)
            if u not in candidates:
                candidates.append(u)

    return ExactPolynomialBasis(tuple(basis), tuple(order_ideal))
