from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "ExactScalar"]

_ZERO = Fraction(0)

# Basis labels in the textual grammar, in coefficient order.
BASIS_NAMES = ("", "i", "r2", "i*r2")


class ExactScalar:
    """Element a + b*i + c*r2 + d*i*r2 of Q(i, sqrt 2).

    Coefficients are Fractions; i^2 = -1 and r2^2 = 2.
    """

    __slots__ = ("_c",)

    def __init__(self, a: int | Fraction = 0, b: int | Fraction = 0,
                 c: int | Fraction = 0, d: int | Fraction = 0):
        self._c = (Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @classmethod
    def _raw(cls, coeffs: tuple) -> ExactScalar:
        obj = object.__new__(cls)
        obj._c = coeffs
        return obj

    @classmethod
    def coerce(cls, value: Number) -> ExactScalar:
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw((Fraction(value), _ZERO, _ZERO, _ZERO))
        raise TypeError(f"Cannot coerce {type(value).__name__} to ExactScalar")

    @classmethod
    def zero(cls) -> ExactScalar:
        return ZERO

    @classmethod
    def one(cls) -> ExactScalar:
        return ONE

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self._c

    @property
    def is_rational(self) -> bool:
        _, b, c, d = self._c
        return not (b or c or d)

    def is_zero(self) -> bool:
        a, b, c, d = self._c
        return not (a or b or c or d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self._c[0]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactScalar):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self._c[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self._c[0])
        return hash(self._c)

    def __add__(self, other: Number) -> ExactScalar:
        if isinstance(other, (int, Fraction)):
            a, b, c, d = self._c
            return ExactScalar._raw((a + other, b, c, d))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        x, y = self._c, other._c
        return ExactScalar._raw((x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]))

    __radd__ = __add__

    def __neg__(self) -> ExactScalar:
        a, b, c, d = self._c
        return ExactScalar._raw((-a, -b, -c, -d))

    def __sub__(self, other: Number) -> ExactScalar:
        if isinstance(other, (int, Fraction)):
            a, b, c, d = self._c
            return ExactScalar._raw((a - other, b, c, d))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        x, y = self._c, other._c
        return ExactScalar._raw((x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]))

    def __rsub__(self, other: Number) -> ExactScalar:
        return (-self) + other

    def _scale(self, k: Fraction) -> ExactScalar:
        a, b, c, d = self._c
        return ExactScalar._raw((a * k, b * k, c * k, d * k))

    def __mul__(self, other: Number) -> ExactScalar:
        if isinstance(other, (int, Fraction)):
            return self._scale(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if other.is_rational:
            return self._scale(other._c[0])
        if self.is_rational:
            return other._scale(self._c[0])
        a1, b1, c1, d1 = self._c
        a2, b2, c2, d2 = other._c
        return ExactScalar._raw((
            a1 * a2 - b1 * b2 + 2 * (c1 * c2 - d1 * d2),
            a1 * b2 + b1 * a2 + 2 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 - (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        ))

    __rmul__ = __mul__

    def inverse(self) -> ExactScalar:
        if self.is_zero():
            raise ZeroDivisionError("ExactScalar division by zero")
        a, b, c, d = self._c
        if not (b or c or d):
            return ExactScalar._raw((1 / a, _ZERO, _ZERO, _ZERO))
        # x = p + q*r2 with p, q in Q(i); x * (p - q*r2) = p^2 - 2 q^2 =: u + v*i
        u = a * a - b * b - 2 * (c * c - d * d)
        v = 2 * a * b - 4 * c * d
        norm = u * u + v * v
        nu, nv = u / norm, -v / norm
        conj = ExactScalar._raw((a, b, -c, -d))
        return conj * ExactScalar._raw((nu, nv, _ZERO, _ZERO))

    def __truediv__(self, other: Number) -> ExactScalar:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("ExactScalar division by zero")
            return self._scale(1 / Fraction(other))
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> ExactScalar:
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> ExactScalar:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** -exponent
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> ExactScalar:
        """Complex conjugation i -> -i."""
        a, b, c, d = self._c
        return ExactScalar._raw((a, -b, c, -d))

    def __repr__(self) -> str:
        return f"ExactScalar({self})"

    def __str__(self) -> str:
        terms = []
        for coeff, name in zip(self._c, BASIS_NAMES):
            if not coeff:
                continue
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            if not name:
                body = str(mag)
            elif mag == 1:
                body = name
            else:
                body = f"{mag}*{name}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


ZERO = ExactScalar()
ONE = ExactScalar(1)
I = ExactScalar(0, 1)
R2 = ExactScalar(0, 0, 1)
