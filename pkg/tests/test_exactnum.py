"""Exact cyclotomic arithmetic: reduction, Galois action, the value trichotomy."""

import cmath
import random
from fractions import Fraction

import pytest
import sympy

from chartab.exactnum import (
    Cyclotomic,
    InvalidConductorError,
    NotAlgebraicIntegerError,
    ValueClass,
    canonicalize,
    classify_value,
    cyclotomic_coeffs,
    m_invariant,
    totient,
)

zeta = Cyclotomic.zeta
one = Cyclotomic.one()
zero = Cyclotomic.zero()


def rat(x) -> Cyclotomic:
    return Cyclotomic.from_rational(Fraction(x))


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def test_cyclotomic_polynomials_match_sympy():
    x = sympy.Symbol("x")
    # 105 is the first conductor with a coefficient outside {-1, 0, 1}
    for n in [*range(1, 41), 48, 60, 105]:
        ours = cyclotomic_coeffs(n)
        ref = sympy.cyclotomic_poly(n, x).as_poly(x).all_coeffs()[::-1]
        assert list(ours) == [int(c) for c in ref], n
        assert len(ours) == totient(n) + 1


def test_conductor_must_be_positive():
    with pytest.raises(InvalidConductorError):
        cyclotomic_coeffs(0)
    with pytest.raises(InvalidConductorError):
        canonicalize(-3, {0: 1})
    with pytest.raises(InvalidConductorError):
        zeta(0)


# ---------------------------------------------------------------------------
# canonical form


def test_reduction_folds_high_powers():
    # zeta_4^2 = -1, zeta_3^2 = -1 - zeta_3
    assert canonicalize(4, {2: 1}) == rat(-1)
    assert canonicalize(3, {2: 1}).coeffs == ((0, -1), (1, -1))
    # exponents are taken mod the conductor
    assert canonicalize(5, {7: 1}) == zeta(5, 2)
    assert canonicalize(6, {6: 1}) == one


def test_canonicalize_is_idempotent():
    v = canonicalize(12, {0: 2, 5: Fraction(1, 3), 11: -4})
    again = canonicalize(v.conductor, dict(v.coeffs))
    assert again.key() == v.key()


def test_cancellation_yields_zero():
    assert (zeta(5) - zeta(5)).is_zero
    total = sum((zeta(5, k) for k in range(1, 5)), rat(1))
    assert total.is_zero  # 1 + zeta + ... + zeta^4 = 0


def test_equality_is_semantic_across_conductors():
    assert zeta(3).embed(12) == zeta(3)
    assert zeta(12, 4) == zeta(3)
    assert Cyclotomic.one(7) == one
    assert zeta(12, 4).key() != zeta(3).key()  # structurally distinct
    with pytest.raises(InvalidConductorError):
        zeta(3).embed(8)  # 3 does not divide 8


# ---------------------------------------------------------------------------
# arithmetic and the Galois action


def test_ring_operations():
    a = rat(1) + zeta(3)
    b = rat(1) + zeta(3, 2)
    assert a * b == one  # (1 + w)(1 + w^2) = 2 + w + w^2 = 1
    assert a + b == one
    assert -(a - a) == zero
    assert (zeta(4) * zeta(4)) == rat(-1)
    assert 2 * zeta(6) == zeta(6) + zeta(6)
    assert (1 - zeta(6)) == rat(1) - zeta(6)


def test_conjugation():
    assert zeta(5).conjugate() == zeta(5, 4)
    assert (rat(1) + zeta(3)).conjugate() == -zeta(3)
    v = canonicalize(8, {1: 1, 3: -2, 0: Fraction(1, 2)})
    assert v.conjugate().conjugate() == v


def test_galois_action_composes():
    v = rat(2) + zeta(7) - zeta(7, 3)
    assert v.galois(2).galois(4) == v.galois(8 % 7)
    assert v.galois(1) == v
    with pytest.raises(ValueError):
        v.galois(7)  # not invertible mod 7


def test_abs_squared():
    root2 = zeta(8) + zeta(8, -1)
    assert root2.abs_squared() == rat(2)
    assert zeta(12, 5).abs_squared() == one
    assert zero.abs_squared() == zero


def test_to_complex_matches_exact_arithmetic():
    v = zeta(3) + zeta(4)  # lands in conductor 12
    assert v.conductor == 12
    expect = cmath.exp(2j * cmath.pi / 3) + 1j
    assert abs(v.to_complex() - expect) < 1e-9


# ---------------------------------------------------------------------------
# integrality


def test_algebraic_integer_detection():
    assert zeta(9).is_algebraic_integer()
    assert (zeta(9) - 3).is_algebraic_integer()
    assert not rat(Fraction(1, 2)).is_algebraic_integer()
    assert not canonicalize(5, {1: Fraction(1, 2)}).is_algebraic_integer()


def test_m_invariant_frozen_values():
    assert m_invariant(rat(1) + zeta(4)) == 2  # |1 + i|^2 = 2 at both embeddings
    assert m_invariant(rat(2)) == 4
    assert m_invariant(zeta(8) + zeta(8, -1)) == 2  # sqrt(2) and -sqrt(2)
    assert m_invariant(zero) == 0
    assert m_invariant(-zeta(45, 7)) == 1


def test_m_invariant_rejects_non_integers():
    with pytest.raises(NotAlgebraicIntegerError):
        m_invariant(Cyclotomic.from_rational(Fraction(1, 2)))
    with pytest.raises(NotAlgebraicIntegerError):
        m_invariant(canonicalize(3, {1: Fraction(2, 3)}))


def test_m_invariant_multiplicative_for_coprime_conductors():
    rng = random.Random(7)
    for m, n in ((3, 4), (5, 8)):
        for _ in range(10):
            a = canonicalize(m, {e: rng.randint(-2, 2) for e in range(totient(m))})
            b = canonicalize(n, {e: rng.randint(-2, 2) for e in range(totient(n))})
            if a.is_zero or b.is_zero:
                continue
            assert m_invariant(a * b) == m_invariant(a) * m_invariant(b)


# ---------------------------------------------------------------------------
# the trichotomy


def test_classify_frozen_values():
    assert classify_value(zero) is ValueClass.ZERO
    assert classify_value(zeta(7, 3)) is ValueClass.ROOT_OF_UNITY
    assert classify_value(-zeta(7, 3)) is ValueClass.ROOT_OF_UNITY
    assert classify_value(rat(1) + zeta(3)) is ValueClass.ROOT_OF_UNITY  # = -zeta_3^2
    assert classify_value(rat(-1)) is ValueClass.ROOT_OF_UNITY
    assert classify_value(rat(2)) is ValueClass.OTHER
    assert classify_value(zeta(8) + zeta(8, -1)) is ValueClass.OTHER
    assert classify_value(rat(1) + zeta(5)) is ValueClass.OTHER
    with pytest.raises(NotAlgebraicIntegerError):
        classify_value(rat(Fraction(1, 2)))  # trichotomy is for integers only


def test_root_of_unity_iff_unit_m_invariant():
    # spot checks both ways on integral values
    for v in (zeta(16, 5), -zeta(9), rat(1) + zeta(3), zeta(8) + zeta(8, 3)):
        is_rou = classify_value(v) is ValueClass.ROOT_OF_UNITY
        assert (m_invariant(v) == 1) == is_rou


def test_classify_matches_float_modulus_oracle():
    rng = random.Random(20260819)
    for _ in range(200):
        n = rng.randint(1, 24)
        raw = {rng.randrange(n): rng.randint(-3, 3) for _ in range(rng.randint(1, 4))}
        v = canonicalize(n, raw)
        modulus = abs(v.to_complex())
        got = classify_value(v)
        if modulus < 1e-9:
            assert got is ValueClass.ZERO
        elif abs(modulus - 1) < 1e-9:
            assert got is ValueClass.ROOT_OF_UNITY
        else:
            assert got is ValueClass.OTHER
        if not v.is_zero:
            assert m_invariant(v) >= 1


def test_random_roots_of_unity_have_unit_m_invariant():
    rng = random.Random(99)
    for _ in range(50):
        n = rng.randint(1, 48)
        v = zeta(n, rng.randrange(n))
        if rng.random() < 0.5:
            v = -v
        assert m_invariant(v) == 1
        assert classify_value(v) is ValueClass.ROOT_OF_UNITY


# ---------------------------------------------------------------------------
# serialization and text


def test_json_round_trip():
    v = canonicalize(20, {0: Fraction(-7, 2), 3: 1, 7: -2})
    doc = v.to_json()
    assert doc["conductor"] == 20
    assert Cyclotomic.from_json(doc) == v
    assert Cyclotomic.from_json(rat(5).to_json()) == rat(5)


def test_str_is_readable():
    assert str(zero) == "0"
    assert str(rat(Fraction(3, 2))) == "3/2"
    s = str(zeta(8) - 2 * zeta(8, 3))
    assert "z8" in s and "z8^3" in s
