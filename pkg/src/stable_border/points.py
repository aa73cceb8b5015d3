"""Empirical point sets: specified values plus a shared tolerance."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class EmpiricalPointSet:
    """``s`` specified points in R^n sharing one tolerance vector.

    Shapes are checked on construction; distinctness and positivity of the
    tolerance are reported by :func:`validate` instead, so that a bad set
    can still be diagnosed.
    """

    points: np.ndarray
    tolerance: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        eps = np.array(self.tolerance, dtype=float).reshape(-1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be a non-empty s x n matrix, got shape {pts.shape}")
        if eps.shape[0] != pts.shape[1]:
            raise ValueError(f"tolerance has {eps.shape[0]} entries for {pts.shape[1]}-dimensional points")
        pts.setflags(write=False)
        eps.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "tolerance", eps)

    @property
    def s(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def with_tolerance(self, tolerance) -> EmpiricalPointSet:
        return EmpiricalPointSet(self.points, tolerance)

    def perturbed(self, offsets: np.ndarray) -> np.ndarray:
        return self.points + np.asarray(offsets, dtype=float)


def weighted_norm(v, tolerance) -> float:
    """``||E v||_2`` with ``E = diag(1/eps_1, ..., 1/eps_n)``."""
    eps = np.asarray(tolerance, dtype=float)
    if np.any(eps <= 0):
        raise ValueError("tolerance entries must be positive")
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != eps.shape[0]:
        raise ValueError("vector and tolerance dimensions differ")
    return float(np.linalg.norm(v / eps))


def are_distinct(p, q, tolerance) -> bool:
    """Two empirical points with a common tolerance are distinct iff their
    (closed) tolerance ellipsoids do not meet, i.e. ``||p - q||_E > 2``."""
    return weighted_norm(np.asarray(p, float) - np.asarray(q, float), tolerance) > 2.0


def validate(X: EmpiricalPointSet) -> list[str]:
    """List every problem with ``X``; an empty list means it is usable."""
    problems = []
    if np.any(X.tolerance <= 0):
        problems.append(f"non-positive tolerance {X.tolerance.tolist()}")
        return problems
    for i in range(X.s):
        for j in range(i + 1, X.s):
            if not are_distinct(X.points[i], X.points[j], X.tolerance):
                d = weighted_norm(X.points[i] - X.points[j], X.tolerance)
                problems.append(f"points {i} and {j} are not distinct (E-distance {d:.6g} <= 2)")
    return problems


def sample_admissible(X: EmpiricalPointSet, rng_seed) -> np.ndarray:
    """Offsets drawn uniformly from each point's tolerance ellipsoid.

    Returns an ``s x n`` matrix whose rows all have E-weighted norm <= 1.
    ``rng_seed`` may be an int, a SeedSequence or a Generator.
    """
    rng = np.random.default_rng(rng_seed)
    s, n = X.points.shape
    direction = rng.standard_normal((s, n))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.random(s) ** (1.0 / n)
    return direction * radius[:, None] * X.tolerance


# -- file formats -----------------------------------------------------------

def read_csv_rows(path) -> list[list[str]]:
    """Raw decimal fields of a point CSV, one row per point.

    Blank lines and lines starting with ``#`` are skipped.  Every row must
    have the same number of fields.
    """
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            fields = [f.strip() for f in row]
            if not fields or all(f == "" for f in fields) or fields[0].startswith("#"):
                continue
            if rows and len(fields) != len(rows[0]):
                raise ValueError(f"{path}:{lineno}: expected {len(rows[0])} fields, got {len(fields)}")
            for f in fields:
                try:
                    float(f)
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: not a number: {f!r}") from None
            rows.append(fields)
    if not rows:
        raise ValueError(f"{path}: no points")
    return rows


def rational_rows(rows: Sequence[Sequence]) -> list[tuple[Fraction, ...]]:
    """Exact rationals from decimal strings; floats go through their repr,
    so ``4.1`` becomes ``41/10`` rather than its binary approximation."""
    def conv(v):
        if isinstance(v, Fraction):
            return v
        if isinstance(v, float):
            v = repr(v)
        return Fraction(v)
    return [tuple(conv(v) for v in row) for row in rows]


def read_tolerance_sidecar(path) -> list[float]:
    data = json.loads(Path(path).read_text())
    return [float(e) for e in data["tolerance"]]


def parse_tolerance(text: str) -> list[float]:
    return [float(e) for e in text.split(",") if e.strip()]
