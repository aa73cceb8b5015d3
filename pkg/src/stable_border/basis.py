"""Border bases founded on a quotient basis, and empirical stability checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .monomial import DEGLEX, PowerProduct, TermOrdering, border
from .points import EmpiricalPointSet, sample_admissible

SINGULAR_RTOL = 1e-10


class NotAQuotientBasisError(ValueError):
    pass


class SingularEvaluationError(ValueError):
    pass


def evaluation_matrix(terms: Sequence[PowerProduct], points) -> np.ndarray:
    """Matrix with entry ``(k, i)`` equal to ``terms[i](points[k])``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    exps = np.array([t.exponents for t in terms], dtype=int)
    return np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)


def _relative_smallest_sv(M: np.ndarray) -> tuple[float, float]:
    sv = np.linalg.svd(M, compute_uv=False)
    return float(sv[-1]), float(sv[0])


@dataclass(frozen=True, eq=False)
class BorderBasis:
    """``g_j = b_j - sum_i alpha[i, j] * t_i`` for every border term ``b_j``."""

    order_ideal: tuple[PowerProduct, ...]
    border: tuple[PowerProduct, ...]
    coefficients: np.ndarray

    def polynomial(self, j: int) -> dict[PowerProduct, float]:
        """Coefficients of ``g_j`` by term (leading border term has 1)."""
        poly = {self.border[j]: 1.0}
        for i, t in enumerate(self.order_ideal):
            poly[t] = -float(self.coefficients[i, j])
        return poly

    def polynomials(self) -> list[dict[PowerProduct, float]]:
        return [self.polynomial(j) for j in range(len(self.border))]

    def residuals(self, points) -> np.ndarray:
        """``g_j(p_k)`` as an ``s x nu`` matrix."""
        return evaluation_matrix(self.border, points) - evaluation_matrix(self.order_ideal, points) @ self.coefficients


def border_basis(order_ideal: Sequence[PowerProduct], points, ordering: TermOrdering = DEGLEX) -> BorderBasis:
    """Solve ``M_O(X) alpha_j = b_j(X)`` for each border term."""
    pts = np.asarray(points, dtype=float)
    O = tuple(order_ideal)
    if len(O) != pts.shape[0]:
        raise NotAQuotientBasisError(f"not a quotient basis (#O = {len(O)} {'<' if len(O) < pts.shape[0] else '>'} {pts.shape[0]})")
    B = tuple(border(O, ordering))
    M = evaluation_matrix(O, pts)
    smin, smax = _relative_smallest_sv(M)
    if smin < SINGULAR_RTOL * smax:
        raise SingularEvaluationError(
            f"evaluation matrix is singular (sigma_min/sigma_max = {smin / smax:.3g})")
    alpha = np.linalg.solve(M, evaluation_matrix(B, pts))
    return BorderBasis(O, B, alpha)


@dataclass(frozen=True, eq=False)
class StabilityReport:
    trials: int
    min_singular_value: float
    median_singular_value: float
    failures: list = field(default_factory=list)
    tolerance: tuple[float, ...] = ()

    @property
    def verdict(self) -> str:
        return "unstable" if self.failures else "stable"

    @property
    def stable(self) -> bool:
        return not self.failures


def verify_stability(order_ideal: Sequence[PowerProduct], X: EmpiricalPointSet, trials: int = 1000,
                     seed: int = 0, forced: Sequence[np.ndarray] = (),
                     sign_test: bool = True) -> StabilityReport:
    """Monte-Carlo check that ``M_O`` keeps full column rank.

    Each trial draws an admissible perturbation (per-trial seeds spawned
    from ``seed``); ``forced`` offset matrices are checked as well.  A
    trial fails when ``sigma_min < 1e-10 * sigma_max``.  For a square
    ``M_O`` a trial whose determinant has the opposite sign from the
    unperturbed one also fails: the admissible region is connected, so the
    determinant vanishes somewhere in between (``sign_test=False`` keeps
    only the singular-value cutoff).
    """
    O = list(order_ideal)
    if len(O) > X.s:
        raise ValueError("order ideal larger than the point set")
    square = sign_test and len(O) == X.s
    ref_sign = np.sign(np.linalg.det(evaluation_matrix(O, X.points))) if square else 0.0

    offsets = list(forced)
    offsets += [sample_admissible(X, child) for child in np.random.SeedSequence(seed).spawn(trials)]
    smins, failures = [], []
    for off in offsets:
        M = evaluation_matrix(O, X.perturbed(off))
        smin, smax = _relative_smallest_sv(M)
        smins.append(smin)
        if smin < SINGULAR_RTOL * smax or (square and np.sign(np.linalg.det(M)) != ref_sign):
            failures.append(np.asarray(off))
    if not smins:
        return StabilityReport(0, math.nan, math.nan, [], tuple(X.tolerance.tolist()))
    return StabilityReport(len(smins), float(np.min(smins)), float(np.median(smins)), failures,
                           tuple(X.tolerance.tolist()))


def estimate_stability_radius(order_ideal: Sequence[PowerProduct], points, trials: int = 200,
                              seed: int = 0, iterations: int = 30) -> float:
    """Largest uniform tolerance ``delta`` at which :func:`verify_stability`
    finds no failure, located by doubling then bisection.

    Sampling can miss failures, so the result is an estimate, not a
    certificate.  Returns ``inf`` when no failure shows up
    even for tolerances far larger than the point coordinates.
    """
    pts = np.asarray(points, dtype=float)
    O = list(order_ideal)
    smin, smax = _relative_smallest_sv(evaluation_matrix(O, pts))
    if smin < SINGULAR_RTOL * smax:
        raise SingularEvaluationError("evaluation matrix is singular at the specified points")
    n = pts.shape[1]

    def stable(delta: float) -> bool:
        X = EmpiricalPointSet(pts, np.full(n, delta))
        return verify_stability(O, X, trials, seed).stable

    scale = max(1.0, float(np.abs(pts).max()))
    lo, hi = 0.0, scale * 1e-3
    while stable(hi):
        lo, hi = hi, hi * 2
        if hi > scale * 1e6:
            return math.inf
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if stable(mid):
            lo = mid
        else:
            hi = mid
    return lo
