"""Power products, term orderings and order ideals.

Power products are exponent vectors; an order ideal is a factor-closed
finite set of them.  Everything here is immutable and purely combinatorial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

SHORT_NAMES = "xyz"


@dataclass(frozen=True)
class PowerProduct:
    """A power product ``x_1^a_1 * ... * x_n^a_n`` stored as its exponents."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(a) for a in self.exponents)
        if any(a < 0 for a in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def one(cls, n: int) -> PowerProduct:
        return cls((0,) * n)

    @classmethod
    def var(cls, i: int, n: int) -> PowerProduct:
        """The indeterminate ``x_{i+1}`` (0-based ``i``) in ``n`` variables."""
        exps = [0] * n
        exps[i] = 1
        return cls(tuple(exps))

    @property
    def nvars(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, other: PowerProduct) -> PowerProduct:
        _check_dims(self, other)
        return PowerProduct(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def times_var(self, i: int) -> PowerProduct:
        exps = list(self.exponents)
        exps[i] += 1
        return PowerProduct(tuple(exps))

    def divides(self, other: PowerProduct) -> bool:
        return divides(self, other)

    def proper_divisors_by_var(self) -> list[PowerProduct]:
        """``t / x_i`` for every variable ``x_i`` dividing ``t``."""
        out = []
        for i, a in enumerate(self.exponents):
            if a:
                exps = list(self.exponents)
                exps[i] -= 1
                out.append(PowerProduct(tuple(exps)))
        return out

    def __call__(self, point: Sequence) -> object:
        """Evaluate at a point; works for floats, Fractions and mpf alike."""
        value = 1
        for c, a in zip(point, self.exponents):
            if a:
                value = value * c**a
        return value

    def __str__(self) -> str:
        return format_term(self)


def _check_dims(t: PowerProduct, u: PowerProduct) -> None:
    if t.nvars != u.nvars:
        raise ValueError(f"dimension mismatch: {t.nvars} vs {u.nvars} variables")


def divides(t: PowerProduct, u: PowerProduct) -> bool:
    """True iff ``t`` divides ``u`` (componentwise exponent comparison)."""
    _check_dims(t, u)
    return all(a <= b for a, b in zip(t.exponents, u.exponents))


@dataclass(frozen=True)
class TermOrdering:
    """A term ordering; only degree-lexicographic is implemented.

    ``precedence`` lists variable indices from most to least significant;
    ``None`` means input order, x_1 > x_2 > ... > x_n.
    """

    kind: str = "deglex"
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind != "deglex":
            raise ValueError(f"unsupported term ordering {self.kind!r}")
        if self.precedence is not None:
            prec = tuple(int(i) for i in self.precedence)
            if sorted(prec) != list(range(len(prec))):
                raise ValueError(f"precedence {prec} is not a permutation")
            object.__setattr__(self, "precedence", prec)

    def key(self, t: PowerProduct) -> tuple:
        exps = t.exponents
        if self.precedence is not None:
            if len(self.precedence) != len(exps):
                raise ValueError("precedence length does not match number of variables")
            exps = tuple(exps[i] for i in self.precedence)
        return (t.degree, exps)

    def sorted(self, terms: Iterable[PowerProduct], reverse: bool = False) -> list[PowerProduct]:
        return sorted(terms, key=self.key, reverse=reverse)

    def min(self, terms: Iterable[PowerProduct]) -> PowerProduct:
        return min(terms, key=self.key)


DEGLEX = TermOrdering()


def compare(t: PowerProduct, u: PowerProduct, ordering: TermOrdering = DEGLEX) -> int:
    """Return -1, 0 or 1 as ``t`` is less than, equal to or greater than ``u``."""
    _check_dims(t, u)
    kt, ku = ordering.key(t), ordering.key(u)
    return (kt > ku) - (kt < ku)


def factor_closure(terms: Iterable[PowerProduct]) -> set[PowerProduct]:
    closure: set[PowerProduct] = set()
    stack = list(terms)
    while stack:
        t = stack.pop()
        if t in closure:
            continue
        closure.add(t)
        stack.extend(t.proper_divisors_by_var())
    return closure


def is_order_ideal(terms: Iterable[PowerProduct]) -> bool:
    terms = list(terms)
    return len(set(terms)) == len(terms) and factor_closure(terms) == set(terms)


def _require_order_ideal(terms: Sequence[PowerProduct]) -> None:
    if not terms:
        raise ValueError("empty set is not an order ideal")
    if not is_order_ideal(terms):
        raise ValueError("terms are not factor-closed")


def border(order_ideal: Sequence[PowerProduct], ordering: TermOrdering = DEGLEX) -> list[PowerProduct]:
    """The border ``(x_1 O u ... u x_n O) \\ O``, sorted ascending."""
    _require_order_ideal(order_ideal)
    inside = set(order_ideal)
    n = order_ideal[0].nvars
    out = {t.times_var(i) for t in order_ideal for i in range(n)} - inside
    return ordering.sorted(out)


def corners(order_ideal: Sequence[PowerProduct], ordering: TermOrdering = DEGLEX) -> list[PowerProduct]:
    """Minimal generators of the monomial ideal spanned by the complement."""
    inside = set(order_ideal)
    return [b for b in border(order_ideal, ordering)
            if all(d in inside for d in b.proper_divisors_by_var())]


# -- rendering and parsing --------------------------------------------------

def format_term(t: PowerProduct, short: bool | None = None) -> str:
    """Render as ``xy^2`` (up to three variables) or ``x[1]*x[2]^2``."""
    n = t.nvars
    if short is None:
        short = n <= len(SHORT_NAMES)
    if t.degree == 0:
        return "1"
    parts = []
    for i, a in enumerate(t.exponents):
        if not a:
            continue
        name = SHORT_NAMES[i] if short else f"x[{i + 1}]"
        parts.append(name if a == 1 else f"{name}^{a}")
    return ("" if short else "*").join(parts)


_TOKEN = re.compile(r"\s*(?:x\[(\d+)\]|([xyz]))(?:\s*\^\s*(\d+))?\s*\*?")


def parse_term(text: str, n: int) -> PowerProduct:
    """Parse ``"1"``, ``"xy^2"``, ``"x*y^2"`` or ``"x[1]^2*x[2]"``."""
    s = text.strip()
    exps = [0] * n
    if s == "1":
        return PowerProduct(tuple(exps))
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse power product {text!r}")
        idx = int(m.group(1)) - 1 if m.group(1) else SHORT_NAMES.index(m.group(2))
        if not 0 <= idx < n:
            raise ValueError(f"variable out of range in {text!r}")
        exps[idx] += int(m.group(3)) if m.group(3) else 1
        pos = m.end()
    return PowerProduct(tuple(exps))
