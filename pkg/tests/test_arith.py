"""Field arithmetic: QQ, GF(p) and simple extensions"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from arith import (
    Extension, PrimeField, Rationals, Scalar, frobenius_power, gf25, is_irreducible,
    is_prime, parse_field
)
from errors import (
    CharZeroField, DegreeTooLarge, DivisionByZero, FieldMismatch, InvalidField, ModulusTooLarge
)

GF25 = gf25()
gf25_elements = st.tuples(st.integers(0, 4), st.integers(0, 4)).map(lambda v: Scalar(GF25, v))


# ============================================================================
# Prime fields and rationals
# ============================================================================

class TestPrimeField:
    """GF(p) residues"""

    def test_arithmetic(self):
        F = PrimeField(7)
        assert F(3) * F(5) == 1
        assert F(3).inv() == 5
        assert F(2) - F(5) == 4
        assert F(-1) == 6

    def test_division_by_zero(self):
        F = PrimeField(7)
        with pytest.raises(DivisionByZero):
            F(1) / F(0)

    def test_division_by_zero_is_a_zero_division_error(self):
        with pytest.raises(ZeroDivisionError):
            PrimeField(3)(0).inv()

    def test_symmetric_printing(self):
        F = PrimeField(5)
        assert str(F(4)) == "-1"
        assert str(F(2)) == "2"
        assert str(F(3)) == "-2"

    def test_non_prime_modulus_rejected(self):
        with pytest.raises(InvalidField):
            PrimeField(4)

    def test_fraction_coercion(self):
        F = PrimeField(5)
        assert F(Fraction(1, 2)) == 3

    def test_is_prime(self):
        assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_equal_numbers_hash_alike(self):
        F = PrimeField(7)
        assert F(-1) == 6
        assert F(-1) != -1
        assert hash(F(-1)) == hash(6)
        assert len({F(6), 6, F(13)}) == 1
        assert {F(3): "three"}[3] == "three"

    @given(st.integers(-200, 200))
    @settings(max_examples=60, deadline=None)
    def test_hash_agrees_with_equality(self, n):
        F = PrimeField(7)
        for other in (n, F(n), GF25(n % 5)):
            if F(n) == other:
                assert hash(F(n)) == hash(other)

    def test_mismatched_fields(self):
        with pytest.raises(FieldMismatch):
            PrimeField(5)(1) + PrimeField(7)(1)


class TestRationals:
    def test_exact(self):
        Q = Rationals()
        assert Q(Fraction(1, 3)) + Q(Fraction(1, 6)) == Fraction(1, 2)
        assert Q.parse_scalar("1/6") == Fraction(1, 6)
        assert Q.parse_scalar("-3") == -3

    def test_hash_matches_fractions(self):
        Q = Rationals()
        assert hash(Q(Fraction(1, 2))) == hash(Fraction(1, 2))
        assert hash(Q(4)) == hash(4)
        assert len({Q(Fraction(8, 2)), 4, Fraction(4)}) == 1

    def test_extension_hash_in_the_prime_field(self):
        t = GF25.generator_scalar()
        assert GF25(3) == 3
        assert hash(GF25(3)) == hash(3)
        assert t != 0 and t * t == 2

    def test_frobenius_undefined(self):
        with pytest.raises(CharZeroField):
            frobenius_power(Rationals()(2), 1)

    def test_characteristic(self):
        assert Rationals().characteristic == 0
        assert not Rationals().is_finite


# ============================================================================
# Extensions
# ============================================================================

class TestIrreducibility:
    def test_quadratics_over_gf5(self):
        assert is_irreducible([3, 0, 1], 5)       # t^2 - 2
        assert not is_irreducible([1, 0, 1], 5)   # t^2 + 1 = (t - 2)(t + 2)
        assert is_irreducible([2, -1, 1], 5)      # t^2 - t + 2

    def test_quartic_by_trial_division(self):
        # (t^2 + 2)(t^2 + 3) over GF(5) has no roots but factors
        assert not is_irreducible([6, 0, 5, 0, 1], 5)

    def test_limits(self):
        with pytest.raises(DegreeTooLarge):
            is_irreducible([1] * 8, 5)
        with pytest.raises(ModulusTooLarge):
            is_irreducible([1, 0, 1], 65537)


class TestExtension:
    """GF(25) and QQ[t]/(t^2 + t - 1)"""

    def test_gf25_model(self):
        t = GF25.generator_scalar()
        assert t * t == GF25(2)
        assert GF25.order == 25
        assert len(list(GF25.elements())) == 25
        assert str(GF25) == "GF(5)[t]/(t^2 - 2)"

    def test_every_nonzero_element_is_invertible(self):
        one = GF25.scalar_one()
        for raw in GF25.elements():
            a = Scalar(GF25, raw)
            if not a.is_zero():
                assert a * a.inv() == one

    def test_frobenius_is_an_involution_on_gf25(self):
        t = GF25.generator_scalar()
        assert frobenius_power(t, 1) != t
        assert frobenius_power(frobenius_power(t, 1), 1) == t
        assert frobenius_power(t, 2) == t

    def test_reducible_modulus_rejected(self):
        with pytest.raises(InvalidField):
            Extension(PrimeField(5), (1, 0, 1))

    def test_golden_extension_over_rationals(self):
        K = parse_field("QQ[t]/(t^2+t-1)")
        t = K.generator_scalar()
        assert t * t + t - 1 == 0
        assert K.characteristic == 0
        assert (t + 1) * t == 1

    def test_subfield_embedding(self):
        assert GF25.embeds(PrimeField(5))
        assert GF25(PrimeField(5)(3)) == 3
        assert GF25.contains(PrimeField(5), GF25(3).value)
        assert not GF25.contains(PrimeField(5), GF25.gen())

    def test_parse_scalar_with_generator(self):
        a = GF25.parse_scalar("2*t + 1")
        assert a == GF25.generator_scalar() * 2 + 1


class TestParseField:
    def test_literals(self):
        assert parse_field("QQ") == Rationals()
        assert parse_field(" GF( 7 ) ") == PrimeField(7)
        F = parse_field("GF(5)[alpha]/(alpha^2-alpha+2)")
        assert F.degree == 2
        assert F.generator_name == "alpha"
        assert str(F) == "GF(5)[alpha]/(alpha^2 - alpha + 2)"

    def test_named_generator_satisfies_its_minimal_polynomial(self):
        F = parse_field("GF(5)[alpha]/(alpha^2-alpha+2)")
        a = F.generator_scalar()
        assert a * a - a + 2 == 0
        assert frobenius_power(a, 1) != a

    @pytest.mark.parametrize("text", ["GF(4)", "GF(4)[t]/(t^2+t+1)", "RR", "GF(5)[t]/(t^2+1)"])
    def test_bad_literals(self, text):
        with pytest.raises(InvalidField):
            parse_field(text)


# ============================================================================
# Properties
# ============================================================================

class TestFieldAxioms:
    @given(gf25_elements, gf25_elements, gf25_elements)
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0

    @given(gf25_elements, gf25_elements)
    @settings(max_examples=60, deadline=None)
    def test_frobenius_is_additive_and_multiplicative(self, a, b):
        assert frobenius_power(a + b, 1) == frobenius_power(a, 1) + frobenius_power(b, 1)
        assert frobenius_power(a * b, 1) == frobenius_power(a, 1) * frobenius_power(b, 1)

    @given(st.integers(-50, 50), st.integers(1, 50))
    @settings(max_examples=60, deadline=None)
    def test_prime_field_fractions(self, n, d):
        F = PrimeField(101)
        assert F(Fraction(n, d)) * d == n % 101
