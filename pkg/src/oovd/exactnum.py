"""Exact arithmetic in the quadratic field Q[sqrt(3)].

A :class:`QS3` stores ``(a + b*sqrt(3)) / d`` as three Python integers kept in
canonical form (``d > 0`` and ``gcd(a, b, d) == 1``), so two values are equal
exactly when their triples are equal.  The rational and irrational parts are
exposed as :class:`fractions.Fraction` through :attr:`QS3.a` and :attr:`QS3.b`.

Signs are decided with integer arithmetic only; floats are produced on demand
and never feed back into a decision.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "QS3",
    "SQRT3",
    "qs3",
    "qs3_arith",
    "qs3_sign",
    "qs3_to_float",
    "sign_ab",
]

_SQRT3_F = math.sqrt(3.0)


def sign_ab(a: int, b: int) -> int:
    """Sign of ``a + b*sqrt(3)`` for integers ``a`` and ``b``."""
    if a >= 0 and b >= 0:
        return 1 if (a or b) else 0
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: the term with the larger square dominates
    aa = a * a
    bb = 3 * b * b
    if aa > bb:
        return 1 if a > 0 else -1
    return 1 if b > 0 else -1


def _to_float(a: int, b: int, d: int) -> float:
    if b == 0:
        return a / d
    # approximate b*sqrt(3) with enough bits that the rounded quotient is
    # within one ulp, widening the window when a and b*sqrt(3) cancel
    bits = 80
    while True:
        scale = 1 << bits
        root = math.isqrt(3 * b * b * scale * scale)
        num = a * scale + (root if b > 0 else -root)
        # |num - exact| <= 1, so 2**64 leading bits make the error negligible
        if abs(num) >> 64 or bits > 4000:
            break
        bits += 64
    try:
        return num / (d * scale)
    except OverflowError:
        raise OverflowError(f"QS3 value too large for float: ({a} + {b}*sqrt3)/{d}") from None


class QS3:
    """Immutable element ``a + b*sqrt(3)`` of Q[sqrt(3)]."""

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, a=0, b=0):
        a = Fraction(a)
        b = Fraction(b)
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d
        self._hash = None

    @classmethod
    def raw(cls, a: int, b: int, d: int = 1) -> "QS3":
        """Build ``(a + b*sqrt3)/d`` from integers, normalising as needed."""
        if d == 0:
            raise ZeroDivisionError("QS3 with zero denominator")
        obj = cls.__new__(cls)
        obj._set(a, b, d)
        return obj

    @property
    def a(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def b(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def triple(self) -> tuple[int, int, int]:
        return self._a, self._b, self._d

    def is_rational(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "QS3":
        return QS3.raw(self._a, -self._b, self._d)

    def sign(self) -> int:
        return sign_ab(self._a, self._b)

    def __float__(self) -> float:
        return _to_float(self._a, self._b, self._d)

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QS3):
            return other
        if isinstance(other, int):
            return QS3.raw(other, 0, 1)
        if isinstance(other, Rational):
            return QS3.raw(other.numerator, 0, other.denominator)
        return NotImplemented

    def __add__(self, other):
        o = QS3._coerce(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            return QS3.raw(self._a + o._a, self._b + o._b, self._d)
        return QS3.raw(self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d)

    __radd__ = __add__

    def __neg__(self):
        obj = QS3.__new__(QS3)
        obj._a, obj._b, obj._d, obj._hash = -self._a, -self._b, self._d, None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = QS3._coerce(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            return QS3.raw(self._a - o._a, self._b - o._b, self._d)
        return QS3.raw(self._a * o._d - o._a * self._d, self._b * o._d - o._b * self._d, self._d * o._d)

    def __rsub__(self, other):
        o = QS3._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = QS3._coerce(other)
        if o is NotImplemented:
            return o
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        return QS3.raw(a1 * a2 + 3 * b1 * b2, a1 * b2 + a2 * b1, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> "QS3":
        a, b, d = self._a, self._b, self._d
        norm = a * a - 3 * b * b
        if norm == 0:
            # only zero has vanishing norm since sqrt(3) is irrational
            raise ZeroDivisionError("QS3 division by zero")
        # d / (a + b sqrt3) = d (a - b sqrt3) / (a^2 - 3 b^2)
        return QS3.raw(d * a, -d * b, norm)

    def __truediv__(self, other):
        o = QS3._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = QS3._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def mul_sqrt3(self) -> "QS3":
        """Multiply by sqrt(3) without a general product."""
        return QS3.raw(3 * self._b, self._a, self._d)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QS3):
            return self._a == other._a and self._b == other._b and self._d == other._d
        o = QS3._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self == o

    def __hash__(self):
        h = self._hash
        if h is None:
            if self._b == 0:
                # agree with hash(Fraction) / hash(int) for rational values
                h = hash(Fraction(self._a, self._d))
            else:
                h = hash((self._a, self._b, self._d))
            self._hash = h
        return h

    def _cmp(self, other) -> int:
        o = QS3._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QS3 with {type(other).__name__}")
        return sign_ab(self._a * o._d - o._a * self._d, self._b * o._d - o._b * self._d)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- text / serialisation ------------------------------------------------

    def __repr__(self) -> str:
        return f"QS3({self.a}, {self.b})"

    def __str__(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        if a == 0:
            return f"{b}*sqrt3"
        return f"{a}{'+' if b > 0 else '-'}{abs(b)}*sqrt3"

    def to_json(self) -> dict:
        a, b = self.a, self.b
        return {
            "a": f"{a.numerator}/{a.denominator}",
            "b": f"{b.numerator}/{b.denominator}",
            "float": float(self),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QS3":
        return cls(Fraction(obj["a"]), Fraction(obj["b"]))


SQRT3 = QS3.raw(0, 1, 1)
ZERO = QS3.raw(0, 0, 1)
ONE = QS3.raw(1, 0, 1)


def qs3(a=0, b=0) -> QS3:
    """Shorthand constructor accepting ints, Fractions or ``"p/q"`` strings."""
    return QS3(Fraction(a), Fraction(b))


def qs3_arith(x: QS3, y: QS3, op: str) -> QS3:
    """Apply ``op`` (one of add, sub, mul, div) to ``x`` and ``y``.

    Raises ZeroDivisionError for division by zero.
    """
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def qs3_sign(x: QS3) -> int:
    return x.sign()


def qs3_to_float(x: QS3) -> float:
    """Float nearest to ``x``; the error is at most one ulp beyond correct rounding."""
    return float(x)
