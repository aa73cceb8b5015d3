"""Stable Order Ideal (SOI) construction.

Terms are examined in increasing term order.  A term joins the order ideal
when no admissible perturbation can (to first order) make its evaluation
vector dependent on those already accepted; otherwise it becomes a corner.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .folinalg import (
    FLOAT64,
    Arithmetic,
    FirstOrderMatrix,
    eval_first_order,
    is_zero_residual,
    ls_first_order,
    min_norm_solution,
)
from .monomial import DEGLEX, PowerProduct, TermOrdering, corners, is_order_ideal
from .points import EmpiricalPointSet, validate

log = logging.getLogger(__name__)

CANDIDATE_RULES = ("literal", "bm")


@dataclass(frozen=True)
class TraceEntry:
    term: PowerProduct
    e_hat_norm: float
    threshold: float
    accepted: bool


@dataclass(frozen=True)
class SOIResult:
    order_ideal: tuple[PowerProduct, ...]
    corners: tuple[PowerProduct, ...]
    is_quotient_basis: bool
    trace: tuple[TraceEntry, ...]

    @property
    def accepted_count(self) -> int:
        return sum(e.accepted for e in self.trace)


class CandidateList:
    """The candidate list ``L``, kept sorted by the term ordering."""

    def __init__(self, terms: Iterable[PowerProduct] = (), ordering: TermOrdering = DEGLEX):
        self.ordering = ordering
        self._terms: list[PowerProduct] = []
        for t in terms:
            self.add(t)

    def add(self, t: PowerProduct) -> None:
        if t not in self._terms:
            self._terms.append(t)
            self._terms.sort(key=self.ordering.key)

    def pop_min(self) -> PowerProduct:
        return self._terms.pop(0)

    def remove_multiples_of(self, t: PowerProduct) -> None:
        self._terms = [u for u in self._terms if not t.divides(u)]

    def copy(self) -> CandidateList:
        return CandidateList(self._terms, self.ordering)

    def __iter__(self) -> Iterator[PowerProduct]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, t) -> bool:
        return t in self._terms

    def __repr__(self):
        return f"CandidateList({[str(t) for t in self._terms]})"


def accept_test(e_hat, s: int, tolerance) -> bool:
    """Accept iff ``||e_hat|| > sqrt(s) * ||eps||`` (strict)."""
    return float(np.linalg.norm(np.asarray(e_hat, dtype=float))) > acceptance_threshold(s, tolerance)


def acceptance_threshold(s: int, tolerance) -> float:
    return math.sqrt(s) * float(np.linalg.norm(np.asarray(tolerance, dtype=float)))


def update_candidates(L: CandidateList, C: Iterable[PowerProduct], t: PowerProduct,
                      rule: str = "literal") -> CandidateList:
    """Extend ``L`` with the products ``x_i * t`` of a newly accepted ``t``.

    ``literal``: ``x_i t`` is added unless it is a multiple of some element
    of ``L`` or of ``C`` (an element equal to one in ``L`` counts as a
    multiple).  ``bm``: added unless already in ``L`` or a multiple of a
    corner in ``C``.
    """
    if rule not in CANDIDATE_RULES:
        raise ValueError(f"unknown candidate rule {rule!r}")
    C = list(C)
    current = list(L)
    out = L.copy()
    for i in range(t.nvars):
        u = t.times_var(i)
        if any(c.divides(u) for c in C):
            continue
        if rule == "literal" and any(m.divides(u) for m in current):
            continue
        if rule == "bm" and u in current:
            continue
        out.add(u)
    return out


def soi(X: EmpiricalPointSet, ordering: TermOrdering = DEGLEX, rule: str = "literal",
        arith: Arithmetic = FLOAT64) -> SOIResult:
    problems = validate(X)
    if problems:
        raise ValueError("invalid empirical point set: " + "; ".join(problems))
    s, n = X.points.shape
    threshold = acceptance_threshold(s, X.tolerance)

    O = [PowerProduct.one(n)]
    L = CandidateList([PowerProduct.var(i, n) for i in range(n)], ordering)
    C: list[PowerProduct] = []
    M = FirstOrderMatrix.ones_column(s, n * s, arith)
    trace = []

    while len(L):
        t = L.pop_min()
        if not is_order_ideal(O + [t]):
            raise RuntimeError(f"candidate {t} would break factor closure of {O}")
        v = eval_first_order(t, X, arith)
        ls = ls_first_order(M, v, arith)
        if is_zero_residual(ls.rho0, v.v0, arith):
            e_hat_norm = 0.0
        else:
            e_hat = min_norm_solution(ls.rho1, -ls.rho0, arith)
            e_hat_norm = float(arith.norm(e_hat))
        accepted = e_hat_norm > threshold
        log.debug("term %s: |e_hat| = %.6g, threshold %.6g -> %s",
                  t, e_hat_norm, threshold, "accept" if accepted else "corner")
        trace.append(TraceEntry(t, e_hat_norm, threshold, accepted))
        if accepted:
            M = M.append(v)
            O.append(t)
            L = update_candidates(L, C, t, rule)
        else:
            C.append(t)
            L.remove_multiples_of(t)

    if set(C) != set(corners(O, ordering)):
        log.warning("rejected terms %s differ from the corners of %s",
                    [str(c) for c in C], [str(o) for o in O])
    return SOIResult(tuple(O), tuple(C), len(O) == s, tuple(trace))
