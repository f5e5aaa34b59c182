"""Exact Gaussian-rational scalars: the field Q(i) built on fractions.Fraction.

All coefficient arithmetic in this package happens here or in nupoly;
nothing downstream ever touches floats except explicitly flagged exports.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


class QI:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("QI is immutable")

    # -- coercion -----------------------------------------------------------

    @staticmethod
    def of(x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, (int, Fraction)):
            return QI(x)
        raise TypeError(f"cannot coerce {x!r} to QI")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = QI.of(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QI.of(other)
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return QI.of(other) - self

    def __mul__(self, other):
        o = QI.of(other)
        return QI(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI.of(other)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return QI((self.re * o.re + self.im * o.im) / n,
                  (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        return QI.of(other) / self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def __eq__(self, other):
        try:
            o = QI.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = QI(0)
ONE = QI(1)
I = QI(0, 1)


def frac_str(x: Fraction) -> str:
    """Serialize a Fraction as 'p/q' (denominator always written)."""
    return f"{x.numerator}/{x.denominator}"


def frac_parse(s: str) -> Fraction:
    return Fraction(s)


def qi_to_json(c: QI) -> dict:
    return {"re": frac_str(c.re), "im": frac_str(c.im)}


def qi_from_json(d: dict) -> QI:
    return QI(frac_parse(d["re"]), frac_parse(d["im"]))


class ExactSqrt:
    """The nonnegative square root of an exact rational, kept symbolic.

    Floating evaluation happens only on demand via float().
    """

    __slots__ = ("radicand",)

    def __init__(self, radicand):
        radicand = _frac(radicand)
        if radicand < 0:
            raise ValueError("negative radicand")
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("ExactSqrt is immutable")

    def __float__(self):
        return math.sqrt(float(self.radicand))

    def __eq__(self, other):
        return isinstance(other, ExactSqrt) and self.radicand == other.radicand

    def __repr__(self):
        return f"sqrt({self.radicand})"
