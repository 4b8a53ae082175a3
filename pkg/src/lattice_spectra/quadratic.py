"""Exact numbers of the form a + b*sqrt(3) with rational a, b.

Planar lattice coordinates (square, triangular, hexagonal, Kagome) all live
in Q(sqrt 3), so unit-distance tests can be decided without rounding.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

SQRT3 = math.sqrt(3.0)


class QSqrt3:
    """Element ``a + b*sqrt(3)`` of the quadratic field Q(sqrt 3)."""

    __slots__ = ("a", "b")

    def __init__(self, a: Rational = 0, b: Rational = 0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, x) -> "QSqrt3":
        if isinstance(x, QSqrt3):
            return x
        return cls(x, 0)

    def __add__(self, other):
        o = QSqrt3.coerce(other)
        return QSqrt3(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt3(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-QSqrt3.coerce(other))

    def __rsub__(self, other):
        return QSqrt3.coerce(other) - self

    def __mul__(self, other):
        o = QSqrt3.coerce(other)
        return QSqrt3(self.a * o.a + 3 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = QSqrt3.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * SQRT3

    def __repr__(self):
        return f"QSqrt3({self.a}, {self.b})"

    def to_json(self):
        return [[self.a.numerator, self.a.denominator], [self.b.numerator, self.b.denominator]]

    @classmethod
    def from_json(cls, obj) -> "QSqrt3":
        (an, ad), (bn, bd) = obj
        return cls(Fraction(an, ad), Fraction(bn, bd))


def squared_distance(p, q) -> QSqrt3:
    """Exact squared Euclidean distance between two points with QSqrt3 coordinates."""
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


def lattice_point(m: int, n: int):
    """Planar point ``m*w1 + n*w2`` with ``w1 = 1`` and ``w2 = exp(i*pi/3)``."""
    return (QSqrt3(Fraction(2 * m + n, 2)), QSqrt3(0, Fraction(n, 2)))
