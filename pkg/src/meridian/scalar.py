"""Exact scalar arithmetic for the two ambient fields, and the projective point type.

A scalar lives either in GF(p) for an odd prime p (canonical residue 0..p-1)
or in the rationals (reduced fraction, positive denominator).  A point is a
scalar or the distinguished value ``INF``.  Everything is immutable and pure.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import DivisionByZero, FieldMismatch, ParseError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin; the base set is exact for n < 3.3e24
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ambient field: GF(p) when ``p`` is set, rationals when ``p`` is None."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if self.p == 2:
                raise ValueError("characteristic 2 is excluded (1+1 must be nonzero)")
            if self.p < 3 or not _is_prime(self.p):
                raise ValueError(f"{self.p} is not an odd prime")

    @classmethod
    def gf(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    def scalar(self, value) -> "Scalar":
        return Scalar(self, value)

    def zero(self) -> "Scalar":
        return Scalar(self, 0)

    def one(self) -> "Scalar":
        return Scalar(self, 1)

    def elements(self) -> Iterator["Scalar"]:
        """All field elements; only available for prime fields."""
        if self.p is None:
            raise ValueError("the rationals cannot be enumerated")
        return (Scalar(self, v) for v in range(self.p))

    def label(self) -> str:
        return "q" if self.p is None else f"gf:{self.p}"

    def __repr__(self):
        return f"FieldSpec({self.label()})"


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.gf(p)


@dataclass(frozen=True)
class Scalar:
    """Field element in canonical form (residue mod p, or reduced Fraction)."""

    field: FieldSpec
    value: Union[int, Fraction]

    def __post_init__(self):
        if self.field.p is not None:
            object.__setattr__(self, "value", int(self.value) % self.field.p)
        elif not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))

    def _check(self, other: "Scalar"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.label()} vs {other.field.label()}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field, self.value + other.value)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field, self.value - other.value)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field, self.value * other.value)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        if other.is_zero:
            raise DivisionByZero("division by zero scalar")
        if self.field.p is not None:
            return Scalar(self.field, self.value * pow(other.value, -1, self.field.p))
        return Scalar(self.field, self.value / other.value)

    def __neg__(self) -> "Scalar":
        return Scalar(self.field, -self.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> "Scalar":
        return Scalar(self.field, 1) / self

    def __repr__(self):
        return f"Scalar({self.field.label()}, {self.value})"


class _Infinity:
    """The single point at infinity; compares equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __hash__(self):
        return hash("meridian-infinity")


INF = _Infinity()

Point = Union[Scalar, _Infinity]


def is_inf(pt: Point) -> bool:
    return pt is INF


def is_finite(pt: Point) -> bool:
    return pt is not INF


def point_sort_key(pt: Point):
    """Finite points in ascending canonical order, infinity last."""
    if pt is INF:
        return (1, 0)
    return (0, pt.value)


class SquareClass(enum.Enum):
    ZERO = "zero"
    SQUARE = "square"
    NONSQUARE = "nonsquare"

    def __repr__(self):
        return f"SquareClass.{self.name}"


def square_class(a: Scalar) -> SquareClass:
    """Classify a scalar against the field's square cone.

    GF(p): Euler-criterion quadratic-residue test.  Rationals: the positive
    cone stands in for the squares (zero / positive / negative).
    """
    if a.is_zero:
        return SquareClass.ZERO
    p = a.field.p
    if p is None:
        return SquareClass.SQUARE if a.value > 0 else SquareClass.NONSQUARE
    return SquareClass.SQUARE if pow(a.value, (p - 1) // 2, p) == 1 else SquareClass.NONSQUARE


def _tonelli_shanks(n: int, p: int) -> int:
    # standard algorithm; caller guarantees n is a nonzero residue
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt(a: Scalar) -> Optional[Scalar]:
    """An exact square root when one exists in the ambient field, else None.

    GF(p) returns the smaller of the two residue roots; the rationals demand
    both numerator and denominator be perfect integer squares.
    """
    p = a.field.p
    if p is not None:
        if a.value == 0:
            return a
        if square_class(a) is not SquareClass.SQUARE:
            return None
        r = _tonelli_shanks(a.value, p)
        return Scalar(a.field, min(r, p - r))
    v = a.value
    if v < 0:
        return None
    rn, rd = math.isqrt(v.numerator), math.isqrt(v.denominator)
    if rn * rn == v.numerator and rd * rd == v.denominator:
        return Scalar(a.field, Fraction(rn, rd))
    return None


def arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Named-operation form of the four field operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


_POINT_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def parse_scalar(text: str, field: FieldSpec) -> Scalar:
    text = text.strip()
    m = _POINT_RE.match(text)
    if not m:
        for i, ch in enumerate(text):
            if not (ch.isdigit() or ch in "-/"):
                raise ParseError(f"bad scalar literal {text!r}", i)
        raise ParseError(f"bad scalar literal {text!r}", 0)
    num = int(m.group(1))
    if m.group(2) is None:
        return Scalar(field, num)
    den = int(m.group(2))
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}", text.index("/") + 1)
    if field.p is not None:
        return Scalar(field, num) / Scalar(field, den)
    return Scalar(field, Fraction(num, den))


def parse_point(text: str, field: FieldSpec) -> Point:
    """Parse the literal grammar ``"inf" | integer | integer "/" pos-integer``."""
    if text.strip() == "inf":
        return INF
    return parse_scalar(text, field)


def format_point(pt: Point) -> str:
    if pt is INF:
        return "inf"
    v = pt.value
    if isinstance(v, Fraction) and v.denominator != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v))


def points_of(field: FieldSpec) -> list:
    """The full point set M = F + {INF} of a prime field."""
    return list(field.elements()) + [INF]
