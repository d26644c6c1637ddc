"""
Tests for multivector arithmetic, versors and the sandwich action
"""
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from clifford import (
    DimensionMismatchError,
    GradeError,
    Multivector,
    NotARotationPlaneError,
    Versor,
    VersorContractError,
    blade_mask,
    blade_name,
    blade_sign,
    exp_bivector,
    grade_project,
    hodge_dual_3d,
    inner_product,
    normalize_bivector,
    pseudoscalar,
    reverse,
    sandwich,
    wedge,
)
from scalars import TAU, FieldMismatchError, QuadScalar


def random_multivector(rng, dim):
    return Multivector(dim, rng.normal(size=1 << dim))


def e(index, dim, d=None):
    return Multivector.basis(index, dim, d)


def test_blade_names():
    assert blade_mask("e13") == 5
    assert blade_name(5) == "e13"
    assert blade_name(0) == "1"
    assert blade_mask("1") == 0
    for bad in ("x1", "e11", "e9", "e"):
        with pytest.raises(ValueError):
            blade_mask(bad)


def test_blade_sign():
    assert blade_sign(0b10, 0b01) == -1
    assert blade_sign(0b01, 0b10) == 1
    assert blade_sign(0b11, 0b11) == -1


@pytest.mark.parametrize("d", [None, 5])
def test_basis_relations(d):
    e1, e2 = e(1, 3, d), e(2, 3, d)
    one = Multivector.scalar(1, 3, d)
    assert e1 * e1 == one
    assert e1 * e2 == -(e2 * e1)
    assert (e1 * e2) * (e1 * e2) == -one
    assert e1 * e2 == Multivector.blade("e12", 3, d=d)


@pytest.mark.parametrize("dim", [2, 4, 6])
def test_float_product_is_associative(dim):
    rng = np.random.default_rng(7)
    a, b, c = (random_multivector(rng, dim) for _ in range(3))
    assert ((a * b) * c).is_close(a * (b * c), 1e-9)


def test_exact_and_float_layers_agree():
    x = Multivector.from_terms({0: TAU, 3: 1, 5: Fraction(-1, 2), 7: TAU - 1}, 3, 5)
    y = Multivector.from_terms({1: 2, 6: TAU, 4: Fraction(1, 3)}, 3, 5)
    assert (x * y).to_float().is_close(x.to_float() * y.to_float(), 1e-12)


def test_wedge():
    e1, e2, e3 = (e(i, 3) for i in (1, 2, 3))
    assert wedge(e1, e2).is_close(Multivector.blade("e12", 3))
    assert wedge(e2, e1).is_close(-Multivector.blade("e12", 3))
    v = e1 * 2.0 + e3
    assert wedge(v, v).is_close(Multivector.zero(3))


def test_reverse_and_grade_projection():
    x = Multivector.from_terms({0: 1, 1: 2, 3: 3, 7: 4}, 3, 5)
    r = reverse(x)
    assert r[0] == 1 and r[1] == 2 and r[3] == -3 and r[7] == -4
    assert grade_project(x, 2) == Multivector.from_terms({3: 3}, 3, 5)
    assert x.grades() == {0, 1, 2, 3}
    with pytest.raises(GradeError):
        grade_project(x, 4)


def test_pseudoscalar_is_central_in_three_dimensions():
    big_i = pseudoscalar(3, 5)
    for i in (1, 2, 3):
        assert big_i * e(i, 3, 5) == e(i, 3, 5) * big_i
    assert big_i * big_i == Multivector.scalar(-1, 3, 5)
    assert hodge_dual_3d(e(1, 3, 5)) == Multivector.blade("e23", 3, d=5)


def test_inner_product():
    u = Multivector.vector((TAU, 1, 0))
    v = Multivector.vector((1, -1, TAU))
    assert inner_product(u, v) == TAU - 1
    with pytest.raises(GradeError):
        inner_product(u * v, v)


def test_terms_listing():
    v = Multivector.vector((TAU, 0, 1))
    assert v.terms() == [("e1", "t"), ("e3", "1")]
    assert str(Multivector.zero(2)) == "0"


def test_layer_and_dimension_mismatches():
    with pytest.raises(DimensionMismatchError):
        e(1, 2) + e(1, 3)
    with pytest.raises(FieldMismatchError):
        e(1, 3) + e(1, 3, 5)
    with pytest.raises(FieldMismatchError):
        e(1, 3, 5) + e(1, 3, 2)
    with pytest.raises(DimensionMismatchError):
        Multivector.zero(9)


def test_norm2():
    v = Multivector.vector((TAU, 1, 0))
    assert v.norm2() == TAU + 2
    assert v.to_float().norm2().is_close(float(TAU + 2))


def test_reflection_sandwich():
    e1, e2 = e(1, 3, 5), e(2, 3, 5)
    n = Versor.from_multivector(e1)
    assert n.parity == "odd" and n.normalized
    assert sandwich(e1, n) == -e1
    assert sandwich(e2, n) == e2


def test_rotor_rotates_towards_second_vector():
    theta = 0.7
    rotor = exp_bivector(Multivector.blade("e12", 3), theta / 2)
    image = sandwich(e(1, 3), rotor)
    expected = e(1, 3) * math.cos(theta) + e(2, 3) * math.sin(theta)
    assert image.is_close(expected, 1e-12)


def test_sandwich_preserves_inner_products():
    rng = np.random.default_rng(3)
    a, b = (Multivector.vector(rng.normal(size=4)) for _ in range(2))
    u, v = (Multivector.vector(rng.normal(size=4)) for _ in range(2))
    a = a / math.sqrt(float(a.norm2()))
    b = b / math.sqrt(float(b.norm2()))
    versor = Versor.from_vectors([a, b])
    assert versor.parity == "even" and versor.normalized and versor.length == 2
    ui, vi = sandwich(u, versor), sandwich(v, versor)
    assert float(inner_product(ui, vi)) == pytest.approx(float(inner_product(u, v)), abs=1e-12)


def test_versor_contract():
    mixed = Multivector.scalar(1, 3, 5) + e(1, 3, 5)
    with pytest.raises(VersorContractError):
        Versor.from_multivector(mixed)
    long_vector = Versor.from_multivector(e(1, 3, 5) * 2)
    assert not long_vector.normalized
    with pytest.raises(VersorContractError):
        sandwich(e(2, 3, 5), long_vector)
    with pytest.raises(VersorContractError):
        Versor.from_vectors([])


def test_exp_bivector_requires_unit_plane():
    with pytest.raises(NotARotationPlaneError):
        exp_bivector(Multivector.blade("e12", 3) * 2.0, 0.3)
    with pytest.raises(NotARotationPlaneError):
        exp_bivector(e(1, 3), 0.3)
    plane = normalize_bivector(wedge(e(1, 4) + e(2, 4), e(3, 4)))
    assert (plane * plane).is_close(Multivector.scalar(-1.0, 4), 1e-12)


def test_exact_multivectors_hash_by_value():
    x = Multivector.vector((TAU, 1, 0))
    y = Multivector.vector((QuadScalar(Fraction(1, 2), Fraction(1, 2), 5), 1, 0))
    assert x == y and hash(x) == hash(y)
    with pytest.raises(TypeError):
        hash(x.to_float())


def random_exact_multivector(rng, dim):
    return Multivector(dim, [QuadScalar(rng.randint(-3, 3), rng.randint(-3, 3), 5) for _ in range(1 << dim)], 5)


def test_exact_product_is_associative():
    rng = random.Random(11)
    for _ in range(500):
        x, y, z = (random_exact_multivector(rng, 3) for _ in range(3))
        assert (x * y) * z == x * (y * z)


def test_reverse_is_an_anti_automorphism():
    rng = random.Random(5)
    for _ in range(100):
        x, y = random_exact_multivector(rng, 3), random_exact_multivector(rng, 3)
        assert reverse(x * y) == reverse(y) * reverse(x)
    frng = np.random.default_rng(5)
    x, y = random_multivector(frng, 4), random_multivector(frng, 4)
    assert reverse(x * y).is_close(reverse(y) * reverse(x), 1e-12)


def test_exp_bivector_adds_angles_in_one_plane():
    b = Multivector.blade("e12", 3)
    for a, c in [(0.3, 0.4), (1.1, -2.5), (math.pi / 5, math.pi / 7)]:
        product = exp_bivector(b, a).mv * exp_bivector(b, c).mv
        assert product.is_close(exp_bivector(b, a + c).mv, 1e-12)


def test_exp_bivector_of_orthogonal_planes_commute():
    b1, b2 = Multivector.blade("e12", 4), Multivector.blade("e34", 4)
    r1, r2 = exp_bivector(b1, 0.9).mv, exp_bivector(b2, -0.4).mv
    assert (r1 * r2).is_close(r2 * r1, 1e-12)
    expected = Multivector.scalar(math.cos(0.9) * math.cos(0.4), 4) + b1 * (math.sin(0.9) * math.cos(0.4)) \
        - b2 * (math.cos(0.9) * math.sin(0.4)) - Multivector.blade("e1234", 4) * (math.sin(0.9) * math.sin(0.4))
    assert (r1 * r2).is_close(expected, 1e-12)


def test_reflection_is_an_involution():
    n = Versor.from_vectors([Multivector.vector([Fraction(3, 5), Fraction(4, 5), 0], 5)])
    assert n.normalized
    for v in (e(1, 3, 5), e(2, 3, 5), Multivector.vector([TAU, -1, Fraction(1, 2)])):
        assert sandwich(sandwich(v, n), n) == v

    rng = np.random.default_rng(9)
    a = Multivector.vector(rng.normal(size=5))
    m = Versor.from_vectors([a / math.sqrt(float(a.norm2()))])
    v = Multivector.vector(rng.normal(size=5))
    assert sandwich(sandwich(v, m), m).is_close(v, 1e-12)


def test_sandwich_rejects_other_grades_on_both_layers():
    n = Versor.from_vectors([e(1, 3)])
    with pytest.raises(GradeError):
        sandwich(e(1, 3) + Multivector.blade("e23", 3, 0.5), n)
    exact = Versor.from_vectors([e(1, 3, 5)])
    with pytest.raises(GradeError):
        sandwich(e(1, 3, 5) + Multivector.blade("e23", 3, 1, 5), exact)
    assert sandwich(e(2, 3), n).is_close(e(2, 3), 0.0)
