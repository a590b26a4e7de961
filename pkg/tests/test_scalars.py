from __future__ import annotations

import random
from fractions import Fraction

import pytest

from scalars.errors import InputError, PoleError, ScalarSyntaxError, UnboundParameterError
from scalars.field import I, ONE, R2, ZERO, ExactScalar
from scalars.parser import format_scalar, free_names, parse_constant, parse_scalar_expr, tokenize
from scalars.poly import Poly, RatFunc


class TestExactScalar:
    def test_i_squared(self):
        assert I * I == -1

    def test_r2_squared(self):
        assert R2 * R2 == 2

    def test_mixed_product(self):
        ir2 = I * R2
        assert ir2 * ir2 == -2
        assert ir2.coefficients == (0, 0, 0, 1)

    def test_inverse(self):
        x = ExactScalar(1, 2, 3, -1)
        assert x * x.inverse() == ONE

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ONE / ZERO

    def test_rational_equality_with_int(self):
        assert ExactScalar(Fraction(4, 2)) == 2
        assert hash(ExactScalar(2)) == hash(2)

    def test_non_rational_is_not_int(self):
        assert I != 0
        with pytest.raises(ValueError):
            I.rational()

    def test_str(self):
        assert str(ExactScalar(0, Fraction(7, 2))) == "7/2*i"
        assert str(ExactScalar(Fraction(-1, 9))) == "-1/9"
        assert str(ExactScalar(1, -1)) == "1 - i"
        assert str(ZERO) == "0"

    def test_str_round_trips_through_parser(self):
        for x in (ExactScalar(0, Fraction(7, 2)), ExactScalar(Fraction(-1, 9)),
                  ExactScalar(1, -1, 2, Fraction(1, 3)), R2):
            assert parse_constant(str(x)) == x

    def test_pow(self):
        assert (1 + I) ** 2 == 2 * I
        assert R2 ** -2 == Fraction(1, 2)

    def test_conjugate(self):
        assert ExactScalar(1, 2, 3, 4).conjugate() == ExactScalar(1, -2, 3, -4)


def random_scalar(rng: random.Random) -> ExactScalar:
    return ExactScalar(*(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(4)))


class TestFieldAxioms:
    @pytest.fixture
    def triples(self):
        rng = random.Random(20240501)
        return [tuple(random_scalar(rng) for _ in range(3)) for _ in range(60)]

    def test_ring_laws(self, triples):
        for a, b, c in triples:
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert a + ZERO == a and a * ONE == a
            assert a - a == ZERO

    def test_inverses(self, triples):
        for a, b, _ in triples:
            if not a.is_zero():
                assert a * a.inverse() == ONE
                assert (b / a) * a == b

    def test_str_round_trip(self, triples):
        for a, _, _ in triples:
            assert parse_constant(str(a)) == a


class TestPoly:
    def test_trailing_zeros_trimmed(self):
        assert Poly([1, 2, 0, 0]).degree == 1

    def test_divmod(self):
        q, r = Poly([-1, 0, 1]).divmod(Poly([-1, 1]))
        assert q == Poly([1, 1])
        assert r.is_zero()

    def test_gcd_is_monic(self):
        a = Poly([-2, 0, 2])  # 2t^2 - 2
        b = Poly([2, 2])      # 2t + 2
        assert a.gcd(b) == Poly([1, 1])

    def test_evaluate(self):
        assert Poly([1, 2, 3])(2) == 17


class TestRatFunc:
    def test_reduced_form(self):
        t = RatFunc.t()
        f = (t * t - 1) / (t - 1)
        assert f == t + 1
        assert f.is_polynomial

    def test_denominator_monic(self):
        f = RatFunc(Poly([1]), Poly([0, 2]))
        assert f.den == Poly([0, 1])
        assert f.num == Poly([Fraction(1, 2)])

    def test_pole(self):
        f = RatFunc.one() / RatFunc.t()
        with pytest.raises(PoleError):
            f.evaluate(0)

    def test_constant(self):
        assert RatFunc.coerce(I).is_constant
        assert RatFunc.coerce(I).constant_value() == I
        assert not RatFunc.t().is_constant

    def test_substitute(self):
        t = RatFunc.t()
        assert (t * t).substitute(t + 1) == t * t + 2 * t + 1

    def test_print_parse_round_trip(self):
        rng = random.Random(7)
        for _ in range(40):
            num = Poly([random_scalar(rng) for _ in range(rng.randint(1, 4))])
            den = Poly([random_scalar(rng) for _ in range(rng.randint(0, 3))] + [ONE])
            f = RatFunc(num, den)
            assert parse_scalar_expr(str(f)) == f


class TestParser:
    def test_basic(self):
        assert parse_constant("1/2 + 3*i") == ExactScalar(Fraction(1, 2), 3)

    def test_precedence(self):
        assert parse_constant("2 + 3*4^2") == 50
        assert parse_constant("-2^2") == -4

    def test_t_expression(self):
        f = parse_scalar_expr("(1 - 2*t^2)/t")
        assert f.evaluate(1) == -1
        with pytest.raises(PoleError):
            f.evaluate(0)

    def test_bindings(self):
        assert parse_constant("a*b - 1", {"a": 2, "b": I}) == 2 * I - 1

    def test_ratfunc_binding(self):
        f = parse_scalar_expr("1/a", {"a": RatFunc.t()})
        assert f == RatFunc.one() / RatFunc.t()

    def test_unbound(self):
        with pytest.raises(UnboundParameterError) as info:
            parse_scalar_expr("a + 1")
        assert info.value.name == "a"

    def test_syntax_error_position(self):
        with pytest.raises(ScalarSyntaxError) as info:
            parse_scalar_expr("1 + $")
        assert info.value.position == 4

    def test_syntax_error_is_input_error(self):
        with pytest.raises(InputError):
            parse_scalar_expr("(1 + 2")

    def test_empty(self):
        with pytest.raises(ScalarSyntaxError):
            parse_scalar_expr("   ")

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            parse_scalar_expr("1/(1 - 1)")

    def test_constant_rejects_t(self):
        with pytest.raises(InputError):
            parse_constant("t + 1")

    def test_free_names(self):
        assert free_names("e0 + t*b - i*r2") == {"e0", "b"}

    def test_tokenize_skips_whitespace(self):
        kinds = [tok.kind for tok in tokenize(" 2 * x ")]
        assert kinds == ["int", "op", "name", "end"]

    def test_format_scalar(self):
        assert format_scalar(Fraction(3, 4)) == "3/4"
        assert format_scalar(R2 * 2) == "2*r2"
