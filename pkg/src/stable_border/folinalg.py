"""First-order (degree <= 1) truncated linear algebra in the error variables.

A perturbed point set has ``n*s`` error variables ``e_kj`` (coordinate ``j``
of point ``k``).  Every quantity here is kept as a degree-0 part plus the
coefficient matrix of its degree-1 part in those variables.  Column
``j*s + k`` (0-based) of a degree-1 block is the coefficient of ``e_kj``,
i.e. the variables are ordered ``e_11, ..., e_s1, e_12, ..., e_sn``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.linalg

from .monomial import PowerProduct
from .points import EmpiricalPointSet

RANK_RTOL = 1e-12        # |R_ii| below this (relative) => M0 rank deficient
PINV_RTOL = 1e-12        # singular-value cutoff for the min-norm solve
ZERO_RESIDUAL_RTOL = 1e-12
SINGULAR_RTOL = 1e-14    # for inverse_first_order


class RankDeficientError(ValueError):
    pass


def error_index(k: int, j: int, s: int) -> int:
    """Column of error variable ``e_kj`` (0-based point ``k``, coordinate ``j``)."""
    return j * s + k


class Arithmetic:
    """Scalar backend: IEEE doubles (``bits == 53``) or mpmath at ``bits``.

    Extended precision stores numbers as numpy object arrays of ``mpf``
    belonging to a private mpmath context, so runs at different precisions
    do not interfere.
    """

    def __init__(self, bits: int = 53):
        if bits < 53:
            raise ValueError("precision must be at least 53 bits")
        self.bits = int(bits)
        if self.extended:
            self.ctx = mpmath.MPContext()
            self.ctx.prec = self.bits
            self._conv = np.frompyfunc(self.ctx.mpf, 1, 1)

    @property
    def extended(self) -> bool:
        return self.bits > 53

    def __repr__(self):
        return f"Arithmetic(bits={self.bits})"

    def asarray(self, a) -> np.ndarray:
        if not self.extended:
            return np.asarray(a, dtype=float)
        a = np.asarray(a)
        if a.dtype == object and a.size and isinstance(a.flat[0], self.ctx.mpf):
            return a
        return np.asarray(self._conv(a), dtype=object).reshape(a.shape)

    def zeros(self, shape) -> np.ndarray:
        return self.asarray(np.zeros(shape))

    def ones(self, shape) -> np.ndarray:
        return self.asarray(np.ones(shape))

    def to_float(self, a) -> np.ndarray:
        return np.asarray(a, dtype=float) if not self.extended else np.vectorize(float, otypes=[float])(a)

    def norm(self, v) -> float:
        if not self.extended:
            return float(np.linalg.norm(v))
        return self.ctx.sqrt(self.ctx.fsum(x * x for x in np.asarray(v).flat))

    # -- factorizations ---------------------------------------------------

    def _tomp(self, a):
        return self.ctx.matrix(a.tolist())

    def _fromp(self, m):
        return np.array(m.tolist(), dtype=object).reshape(m.rows, m.cols)

    def qr(self, A):
        if not self.extended:
            return np.linalg.qr(A, mode="reduced")
        Q, R = self.ctx.qr(self._tomp(A), mode="skinny")
        return self._fromp(Q), self._fromp(R)

    def solve_triangular(self, R, B, lower: bool = False):
        if not self.extended:
            return scipy.linalg.solve_triangular(R, B, lower=lower)
        k = R.shape[0]
        X = np.array(B, dtype=object, copy=True)
        order = range(k) if lower else range(k - 1, -1, -1)
        for i in order:
            rest = range(i) if lower else range(i + 1, k)
            acc = X[i]
            for j in rest:
                acc = acc - R[i, j] * X[j]
            X[i] = acc / R[i, i]
        return X

    def svd(self, A):
        """Thin SVD ``A = U diag(S) Vt``."""
        if not self.extended:
            return np.linalg.svd(A, full_matrices=False)
        U, S, Vt = self.ctx.svd_r(self._tomp(A), full_matrices=False)
        return self._fromp(U), np.array(S.tolist(), dtype=object).reshape(-1), self._fromp(Vt)


FLOAT64 = Arithmetic(53)


@dataclass(frozen=True, eq=False)
class FirstOrderVector:
    """``v0`` (length s) plus ``v1`` (s x ns), the linear part in ``e``."""

    v0: np.ndarray
    v1: np.ndarray


@dataclass(frozen=True, eq=False)
class FirstOrderMatrix:
    """``M0`` (s x k) plus ``M1`` (s x k x ns): entry (i, j) of the linear
    part is the linear form ``M1[i, j, :] . e``."""

    M0: np.ndarray
    M1: np.ndarray

    @classmethod
    def ones_column(cls, s: int, ns: int, arith: Arithmetic = FLOAT64) -> FirstOrderMatrix:
        return cls(arith.ones((s, 1)), arith.zeros((s, 1, ns)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.M0.shape

    def append(self, v: FirstOrderVector) -> FirstOrderMatrix:
        if v.v0.shape[0] != self.M0.shape[0] or v.v1.shape != (self.M1.shape[0], self.M1.shape[2]):
            raise ValueError("column is not conformal with the matrix")
        return FirstOrderMatrix(np.column_stack([self.M0, v.v0]),
                                np.concatenate([self.M1, v.v1[:, None, :]], axis=1))

    def at(self, e) -> np.ndarray:
        """The truncated matrix ``M0 + M1 . e`` at a concrete error vector."""
        return self.M0 + np.einsum("ikn,n->ik", self.M1, e)


@dataclass(frozen=True, eq=False)
class FirstOrderLSResult:
    alpha0: np.ndarray
    alpha1: np.ndarray
    rho0: np.ndarray
    rho1: np.ndarray


def eval_first_order(t: PowerProduct, X: EmpiricalPointSet, arith: Arithmetic = FLOAT64) -> FirstOrderVector:
    """Degree-0 and degree-1 parts of ``t`` evaluated at the perturbed points.

    Row ``k`` of ``v1`` holds ``dt/dx_j (p_k)`` in the column of ``e_kj``.
    """
    s, n = X.points.shape
    if t.nvars != n:
        raise ValueError(f"term has {t.nvars} variables, points have {n}")
    pts = arith.asarray(X.points)
    v0 = arith.asarray(np.array([t(p) for p in pts], dtype=object if arith.extended else float))
    v1 = arith.zeros((s, n * s))
    for j, a in enumerate(t.exponents):
        if not a:
            continue
        exps = list(t.exponents)
        exps[j] -= 1
        dt = PowerProduct(tuple(exps))
        for k in range(s):
            v1[k, error_index(k, j, s)] = a * dt(pts[k])
    return FirstOrderVector(v0, v1)


def ls_first_order(M: FirstOrderMatrix, v: FirstOrderVector, arith: Arithmetic = FLOAT64) -> FirstOrderLSResult:
    """First-order solution and residual of ``(M0 + M1) x ~ v0 + v1``.

    ``x0 = (M0^T M0)^{-1} M0^T v0``,
    ``x1 = (M0^T M0)^{-1} (M0^T v1 + M1^T v0 - M0^T M1 x0 - M1^T M0 x0)``,
    ``rho0 = v0 - M0 x0`` and ``rho1 = v1 - M0 x1 - M1 x0``.  The inverse
    Gram matrix is applied through a thin QR factorization of ``M0``.
    """
    M0, M1 = M.M0, M.M1
    v0, v1 = v.v0, v.v1
    s, k = M0.shape
    if k > s:
        raise RankDeficientError(f"{k} columns exceed {s} rows")
    Q, R = arith.qr(M0)
    diag = np.abs(arith.to_float(np.diagonal(R)))
    if diag.size and diag.min() <= RANK_RTOL * diag.max():
        raise RankDeficientError("degree-0 matrix does not have full column rank")

    x0 = arith.solve_triangular(R, Q.T @ v0)
    M1x0 = np.einsum("ikn,k->in", M1, x0)
    w = M0.T @ v1 + np.einsum("ikn,i->kn", M1, v0) - M0.T @ M1x0 - np.einsum("ikn,i->kn", M1, M0 @ x0)
    x1 = arith.solve_triangular(R, arith.solve_triangular(R.T, w, lower=True))
    rho0 = v0 - M0 @ x0
    rho1 = v1 - M0 @ x1 - M1x0
    return FirstOrderLSResult(x0, x1, rho0, rho1)


def inverse_first_order(A0, A1):
    """Degree-0 and degree-1 parts of ``(A0 + A1)^{-1}``.

    ``B0 = A0^{-1}`` and ``B1 = -A0^{-1} A1 A0^{-1}``.  ``A1`` is either a
    plain matrix (one direction) or an ``m x m x p`` array of linear forms.
    """
    A0 = np.asarray(A0, dtype=float)
    A1 = np.asarray(A1, dtype=float)
    sv = np.linalg.svd(A0, compute_uv=False)
    if sv[-1] <= SINGULAR_RTOL * sv[0]:
        raise np.linalg.LinAlgError("A0 is singular")
    B0 = np.linalg.inv(A0)
    if A1.ndim == 2:
        return B0, -B0 @ A1 @ B0
    return B0, -np.einsum("ij,jkp,kl->ilp", B0, A1, B0)


def min_norm_solution(C, b, arith: Arithmetic = FLOAT64):
    """Minimal 2-norm (least-squares) solution of ``C e = b`` via the SVD.

    Singular values below ``sigma_max * 1e-12`` are treated as zero, so an
    inconsistent system yields the min-norm least-squares solution.
    """
    C = arith.asarray(C)
    b = arith.asarray(b)
    if C.size == 0:
        return arith.zeros(C.shape[1])
    U, S, Vt = arith.svd(C)
    Sf = arith.to_float(S)
    if Sf.size == 0 or Sf.max() == 0.0:
        return arith.zeros(C.shape[1])
    keep = Sf > PINV_RTOL * Sf.max()
    coef = (U[:, keep].T @ b) / S[keep]
    return Vt[keep].T @ coef


def is_zero_residual(rho0, v0, arith: Arithmetic = FLOAT64) -> bool:
    """``||rho0|| <= 1e-12 * max(1, ||v0||)``."""
    return float(arith.norm(rho0)) <= ZERO_RESIDUAL_RTOL * max(1.0, float(arith.norm(v0)))
