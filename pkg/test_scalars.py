"""
Tests for the exact quadratic-field scalars and the float scalar layer
"""
import random
from fractions import Fraction

import pytest

from scalars import (
    SIGMA,
    SQRT2,
    TAU,
    FieldMismatchError,
    FloatScalar,
    QuadScalar,
    ScalarParseError,
    format_float,
    format_scalar,
    parse_scalar,
)

SAMPLES = [
    TAU,
    SIGMA,
    QuadScalar(Fraction(3, 4), Fraction(-2, 7), 5),
    QuadScalar(-2, 1, 5),
    QuadScalar.from_tau(Fraction(5, 3), -1),
    QuadScalar(Fraction(1, 9), 0, 5),
]


def test_golden_ratio_identities():
    assert TAU * TAU == TAU + 1
    assert SIGMA == 1 - TAU
    assert TAU + SIGMA == 1
    assert TAU * SIGMA == -1
    assert TAU.inverse() == TAU - 1
    assert TAU ** 3 == 2 * TAU + 1
    assert TAU ** -2 == 2 - TAU


@pytest.mark.parametrize("x", SAMPLES)
@pytest.mark.parametrize("y", SAMPLES[:3])
def test_field_laws(x, y):
    z = QuadScalar(Fraction(-1, 3), Fraction(5, 2), 5)
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    assert (x / y) * y == x


@pytest.mark.parametrize("x", SAMPLES)
def test_float_view_matches_exact_value(x):
    assert float(x) == pytest.approx(float(x.a) + float(x.b) * 5 ** 0.5, abs=1e-14)
    assert x.sign() == (0 if x.is_zero() else (1 if float(x) > 0 else -1))


def test_sign_of_near_cancelling_values():
    assert SIGMA.sign() == -1
    assert (TAU - Fraction(8, 5)).sign() == 1
    assert (TAU - Fraction(13, 8)).sign() == -1
    assert QuadScalar(0, 0, 5).sign() == 0


def test_tau_basis_round_trip():
    x = QuadScalar.from_tau(Fraction(1, 2), Fraction(-3, 2))
    assert x.to_tau_basis() == (Fraction(1, 2), Fraction(-3, 2))
    assert TAU.to_tau_basis() == (0, 1)
    with pytest.raises(FieldMismatchError):
        SQRT2.to_tau_basis()


def test_mixing_fields_raises():
    with pytest.raises(FieldMismatchError):
        TAU + SQRT2
    with pytest.raises(FieldMismatchError):
        TAU * SQRT2


def test_rationals_compare_equal_across_fields():
    assert QuadScalar(3, 0, 2) == QuadScalar(3, 0, 5)
    assert hash(QuadScalar(Fraction(1, 2), 0, 5)) == hash(Fraction(1, 2))
    assert QuadScalar(0, 1, 2) != QuadScalar(0, 1, 5)


def test_rational_operands_on_either_side():
    assert Fraction(1, 2) * TAU == QuadScalar(Fraction(1, 4), Fraction(1, 4), 5)
    assert 2 * TAU == QuadScalar(1, 1, 5)
    assert 1 / TAU == TAU - 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        QuadScalar(0, 0, 5).inverse()


def test_sqrt_exact():
    assert (TAU * TAU).sqrt_exact() == TAU
    assert QuadScalar(8, 0, 2).sqrt_exact() == QuadScalar(0, 2, 2)
    assert QuadScalar(Fraction(9, 4), 0, 5).sqrt_exact() == Fraction(3, 2)
    assert QuadScalar(Fraction(3, 5), 0, 5).sqrt_exact() is None
    assert QuadScalar(-4, 0, 5).sqrt_exact() is None
    assert (TAU + 2).sqrt_exact() is None


def test_non_square_free_field_rejected():
    with pytest.raises(ValueError):
        QuadScalar(1, 1, 4)


@pytest.mark.parametrize(
    "value, text",
    [
        (TAU, "t"),
        (SIGMA, "1-t"),
        (-TAU, "-t"),
        (QuadScalar.from_tau(0, Fraction(-1, 2)), "-1/2*t"),
        (QuadScalar.from_tau(Fraction(1, 2), 2), "1/2+2*t"),
        (QuadScalar(Fraction(-3, 4), 0, 5), "-3/4"),
    ],
)
def test_format_tau(value, text):
    assert value.format_tau() == text
    assert str(value) == text
    assert parse_scalar(text) == value


@pytest.mark.parametrize(
    "value, text",
    [
        (SQRT2, "sqrt(2)"),
        (QuadScalar(1, -3, 2), "1-3*sqrt(2)"),
        (QuadScalar(Fraction(1, 2), Fraction(1, 2), 5), "1/2+1/2*sqrt(5)"),
        (QuadScalar(0, -1, 3), "-sqrt(3)"),
    ],
)
def test_format_sqrt(value, text):
    assert value.format_sqrt() == text
    assert parse_scalar(text, value.d) == value


def test_parse_mixed_forms():
    assert parse_scalar("1+sqrt(5)", 5) == 2 * TAU
    assert parse_scalar(" 1/2 - 3/2*t ") == QuadScalar.from_tau(Fraction(1, 2), Fraction(-3, 2))
    assert parse_scalar("2", 2) == QuadScalar(2, 0, 2)
    assert parse_scalar("-t+t") == 0


@pytest.mark.parametrize(
    "text, d, error",
    [
        ("abc", 5, ScalarParseError),
        ("", 5, ScalarParseError),
        ("1/0", 5, ScalarParseError),
        ("sqrt(2)", 5, FieldMismatchError),
        ("t", 2, FieldMismatchError),
    ],
)
def test_parse_errors(text, d, error):
    with pytest.raises(error):
        parse_scalar(text, d)


def test_float_scalar_surface():
    x = FloatScalar(0.5)
    assert (x + 1).is_close(1.5)
    assert (2 - x).is_close(1.5)
    assert (x * 4).is_close(2.0)
    assert (x / 4).is_close(0.125)
    assert x.inverse().is_close(2.0)
    assert (-x).sign() == -1
    assert FloatScalar(1e-12).sign(tol=1e-9) == 0
    with pytest.raises(ZeroDivisionError):
        FloatScalar(0.0).inverse()


def test_float_formatting():
    assert format_float(-0.0) == "0"
    assert format_float(-1e-20) == "-1e-20"
    assert format_float(1 / 3) == "0.333333333333"
    assert format_scalar(Fraction(-1, 2)) == "-1/2"
    assert format_scalar(3) == "3"
    assert format_scalar(TAU) == "t"
    assert format_scalar(FloatScalar(0.25)) == "0.25"


def random_fraction(rng):
    return Fraction(rng.randint(-50, 50), rng.randint(1, 12))


def random_quad(rng, d=5):
    return QuadScalar(random_fraction(rng), random_fraction(rng), d)


def test_tau_basis_round_trip_on_random_pairs():
    rng = random.Random(1)
    for _ in range(1000):
        p, q = random_fraction(rng), random_fraction(rng)
        assert QuadScalar.from_tau(p, q).to_tau_basis() == (p, q)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_conjugation_is_a_field_automorphism(d):
    rng = random.Random(d)
    for _ in range(200):
        x, y = random_quad(rng, d), random_quad(rng, d)
        assert (x + y).conjugate() == x.conjugate() + y.conjugate()
        assert (x * y).conjugate() == x.conjugate() * y.conjugate()
        assert x.conjugate().conjugate() == x
        if not x.is_zero():
            assert x.inverse().conjugate() == x.conjugate().inverse()
    assert TAU.conjugate() == SIGMA


def test_rational_part_is_rational_linear():
    rng = random.Random(2)
    for _ in range(200):
        x, y, c = random_quad(rng), random_quad(rng), random_fraction(rng)
        assert (x * c + y).rational_part() == c * x.rational_part() + y.rational_part()
    assert TAU.rational_part() == Fraction(1, 2)
