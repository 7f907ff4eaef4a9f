"""Exact arithmetic over rational combinations of square roots.

A value is stored as a finite sum ``sum_d c_d * sqrt(d)`` with rational
coefficients ``c_d`` and squarefree positive integer radicands ``d``.
Square roots of distinct squarefree integers are linearly independent
over the rationals, so zero tests and equality are exact.  Every
closed-form quantity in this package (basis normalizations, label
averages, the dual-vector recursion) lives in such an extension, which
is what makes the "exactly zero" assertions in the test suite honest.

All operations are pure; instances are immutable after construction and
safe to share across threads.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Union[int, Fraction]


@lru_cache(maxsize=None)
def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write n = s*s*d with d squarefree; return (s, d).  Requires n >= 1."""
    if n < 1:
        raise ValueError("squarefree_decompose needs a positive integer")
    s, d, m = 1, 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                d *= p
            s *= p ** (e // 2)
        p += 1 if p == 2 else 2
    return s, d * m


@lru_cache(maxsize=None)
def _smallest_prime_factor(d: int) -> int:
    p = 2
    while p * p <= d:
        if d % p == 0:
            return p
        p += 1 if p == 2 else 2
    return d


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class Rad:
    """An element of the field of rationals extended by square roots."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        # terms maps squarefree radicand -> nonzero rational coefficient
        self.terms = {d: c for d, c in (terms or {}).items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def of(cls, x) -> "Rad":
        if isinstance(x, Rad):
            return x
        return cls({1: _as_fraction(x)})

    @classmethod
    def sqrt(cls, x) -> "Rad":
        """Exact square root of a nonnegative rational (or rational Rad)."""
        if isinstance(x, Rad):
            x = x.as_fraction()
        x = _as_fraction(x)
        if x < 0:
            raise ValueError("square root of a negative rational")
        if x == 0:
            return cls()
        s, d = squarefree_decompose(x.numerator * x.denominator)
        return cls({d: Fraction(s, x.denominator)})

    # -- predicates and conversions ---------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(d == 1 for d in self.terms)

    def as_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"{self!r} is irrational")
        return self.terms[1]

    def __float__(self) -> float:
        return float(sum(float(c) * math.sqrt(d) for d, c in self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Rad":
        other = Rad.of(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            out[d] = out.get(d, Fraction(0)) + c
        return Rad(out)

    __radd__ = __add__

    def __neg__(self) -> "Rad":
        return Rad({d: -c for d, c in self.terms.items()})

    def __sub__(self, other) -> "Rad":
        return self + (-Rad.of(other))

    def __rsub__(self, other) -> "Rad":
        return Rad.of(other) + (-self)

    def __mul__(self, other) -> "Rad":
        other = Rad.of(other)
        out: dict[int, Fraction] = {}
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                g = math.gcd(d1, d2)
                d = (d1 // g) * (d2 // g)  # squarefree: the cofactors are coprime
                out[d] = out.get(d, Fraction(0)) + c1 * c2 * g
        return Rad(out)

    __rmul__ = __mul__

    def inverse(self) -> "Rad":
        if not self.terms:
            raise ZeroDivisionError("inverse of zero")
        num = Rad.of(1)
        den = self
        while not den.is_rational():
            p = min(_smallest_prime_factor(d) for d in den.terms if d > 1)
            plain = Rad({d: c for d, c in den.terms.items() if d % p})
            pulled = Rad({d // p: c for d, c in den.terms.items() if d % p == 0})
            conj = plain - Rad({p: Fraction(1)}) * pulled
            num = num * conj
            den = plain * plain - p * pulled * pulled
        return num * Rad.of(1 / den.as_fraction())

    def __truediv__(self, other) -> "Rad":
        return self * Rad.of(other).inverse()

    def __rtruediv__(self, other) -> "Rad":
        return Rad.of(other) * self.inverse()

    def __pow__(self, k: int) -> "Rad":
        if k < 0:
            return self.inverse() ** (-k)
        out = Rad.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = Rad.of(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "Rad(0)"
        bits = [f"{c}*sqrt({d})" if d != 1 else f"{c}" for d, c in sorted(self.terms.items())]
        return "Rad(" + " + ".join(bits) + ")"


def solve_exact(matrix: list[list[Rad]], rhs: list[Rad]) -> list[Rad]:
    """Solve a nonsingular linear system by Gaussian elimination, exactly.

    Rows and entries are Rad values; pivots are chosen by float magnitude
    but all arithmetic stays in the extension field.
    """
    m = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(m):
        pivot = max(range(col, m), key=lambda r: abs(float(a[r][col])))
        if a[pivot][col].is_zero():
            raise ValueError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(m):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][m] for i in range(m)]
