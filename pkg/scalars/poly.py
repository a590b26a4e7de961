from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from scalars.errors import PoleError
from scalars.field import ONE, ZERO, ExactScalar

Coefficient = Union[int, Fraction, ExactScalar]


def _trim(coeffs: list[ExactScalar]) -> tuple[ExactScalar, ...]:
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Univariate polynomial in t over ExactScalar, coefficients low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coefficient] = ()):
        self.coeffs = _trim([ExactScalar.coerce(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple[ExactScalar, ...]) -> Poly:
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        return obj

    @classmethod
    def constant(cls, value: Coefficient) -> Poly:
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coeff: Coefficient = 1) -> Poly:
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> ExactScalar:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly._raw(_trim(out))

    def __neg__(self) -> Poly:
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO_POLY
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return Poly._raw(_trim(out))

    def scale(self, k: Coefficient) -> Poly:
        k = ExactScalar.coerce(k)
        if k.is_zero():
            return ZERO_POLY
        return Poly._raw(tuple(c * k for c in self.coeffs))

    def divmod(self, divisor: Poly) -> tuple[Poly, Poly]:
        if divisor.is_zero():
            raise ZeroDivisionError("Polynomial division by zero")
        remainder = list(self.coeffs)
        dd = divisor.degree
        if len(remainder) - 1 < dd:
            return ZERO_POLY, self
        inv_lead = divisor.leading.inverse()
        quotient = [ZERO] * (len(remainder) - dd)
        for k in range(len(remainder) - 1 - dd, -1, -1):
            c = remainder[k + dd] * inv_lead
            quotient[k] = c
            if c.is_zero():
                continue
            for j, d in enumerate(divisor.coeffs):
                remainder[k + j] = remainder[k + j] - c * d
        return Poly._raw(_trim(quotient)), Poly._raw(_trim(remainder[:dd]))

    def monic(self) -> Poly:
        if self.is_zero() or self.leading == 1:
            return self
        return self.scale(self.leading.inverse())

    def gcd(self, other: Poly) -> Poly:
        """Monic greatest common divisor by the Euclidean algorithm."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def __call__(self, point: Coefficient) -> ExactScalar:
        point = ExactScalar.coerce(point)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"


ZERO_POLY = Poly()
ONE_POLY = Poly([1])


class RatFunc:
    """Rational function num/den in t, kept with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Coefficient, den: Poly | Coefficient | None = None):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if den is None:
            den = ONE_POLY
        elif not isinstance(den, Poly):
            den = Poly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("RatFunc with zero denominator")
        if num.is_zero():
            num, den = ZERO_POLY, ONE_POLY
        elif den.degree > 0:
            g = num.gcd(den)
            if not g.is_one():
                num, den = num.divmod(g)[0], den.divmod(g)[0]
        lead = den.leading
        if lead != 1:
            inv = lead.inverse()
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> RatFunc:
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def coerce(cls, value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Poly):
            return cls._raw(value, ONE_POLY)
        return cls._raw(Poly.constant(value), ONE_POLY)

    @classmethod
    def zero(cls) -> RatFunc:
        return ZERO_RF

    @classmethod
    def one(cls) -> RatFunc:
        return ONE_RF

    @classmethod
    def t(cls) -> RatFunc:
        return cls._raw(Poly.monomial(1), ONE_POLY)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_one()

    @property
    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree <= 0

    def constant_value(self) -> ExactScalar:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else ZERO

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, ExactScalar)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> RatFunc:
        other = RatFunc.coerce(other)
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num + other.num, ONE_POLY)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RatFunc:
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other) -> RatFunc:
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> RatFunc:
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> RatFunc:
        other = RatFunc.coerce(other)
        if self.is_zero() or other.is_zero():
            return ZERO_RF
        if self.den.is_one() and other.den.is_one():
            return RatFunc._raw(self.num * other.num, ONE_POLY)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise ZeroDivisionError("RatFunc division by zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> RatFunc:
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> RatFunc:
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> RatFunc:
        if exponent < 0:
            return self.inverse() ** -exponent
        result, base = ONE_RF, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def evaluate(self, point: Coefficient) -> ExactScalar:
        den = self.den(point)
        if den.is_zero():
            raise PoleError(point)
        return self.num(point) / den

    def substitute(self, value: RatFunc) -> RatFunc:
        """Compose: self(value(t))."""
        def horner(poly: Poly) -> RatFunc:
            acc = ZERO_RF
            for c in reversed(poly.coeffs):
                acc = acc * value + c
            return acc
        return horner(self.num) / horner(self.den)

    def __repr__(self) -> str:
        from scalars.parser import format_ratfunc

        return f"RatFunc({format_ratfunc(self)})"

    def __str__(self) -> str:
        from scalars.parser import format_ratfunc

        return format_ratfunc(self)


ZERO_RF = RatFunc._raw(ZERO_POLY, ONE_POLY)
ONE_RF = RatFunc._raw(ONE_POLY, ONE_POLY)
