"""Tests for coefficient rings, morphisms and p-adic helpers."""

from fractions import Fraction

import pytest

from hida_fullness.errors import BadDomain, BadInput, NonUnit, RingMismatch, TooLarge
from hida_fullness.rings.descriptor import (
    cyc_rational,
    finite_field,
    monogenic_ext,
    rational,
    trunc_iwasawa,
    zmod,
)
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.morphism import (
    RingMorphism,
    arithmetic_prime_spec,
    ring_automorphisms,
)
from hida_fullness.rings.padic import beta_substitute, kappa, sqrt_one_plus_m, teichmuller


@pytest.fixture
def lam():
    return trunc_iwasawa(3, 1, 3)


@pytest.fixture
def lam92():
    return trunc_iwasawa(3, 2, 2)


# ═══════════════════════════════════════════
# Descriptor Tests
# ═══════════════════════════════════════════


class TestDescriptor:
    def test_sizes(self, lam, lam92):
        assert lam.size == 27
        assert lam92.size == 81
        assert zmod(5, 2).size == 25
        assert finite_field(9).size == 9

    def test_truncation_kills_t_power(self, lam):
        t = lam.generator()
        assert lam.power(t, 2) == (0, 0, 1)
        assert lam.is_zero(lam.power(t, 3))

    def test_inverse_of_one_plus_t(self, lam):
        x = lam.add(lam.one, lam.generator())
        inv = lam.inverse(x)
        assert inv == (1, 2, 1)
        assert lam.mul(x, inv) == lam.one

    def test_non_unit_raises(self, lam):
        with pytest.raises(NonUnit):
            lam.inverse(lam.generator())
        assert not lam.is_unit(lam.from_int(3))

    def test_units_are_complement_of_maximal_ideal(self, lam):
        units = list(lam.units())
        assert len(units) == 18
        assert all(not lam.in_maximal_ideal(u) for u in units)

    def test_zmod_inverse(self):
        ring = zmod(3, 2)
        assert ring.inverse((2,)) == (5,)

    def test_finite_field_units_cyclic(self):
        field = finite_field(9)
        g = field.generator()
        powers = {field.power(g, k) for k in range(8)}
        assert len(powers) == 8
        assert field.power(g, 8) == field.one

    def test_frobenius(self):
        field = finite_field(9)
        elements = list(field.elements())
        assert all(field.frobenius(field.frobenius(x)) == x for x in elements)
        assert all(field.frobenius(x, 2) == x for x in elements)
        assert sum(field.frobenius(x) == x for x in elements) == 3
        with pytest.raises(BadDomain):
            zmod(3, 1).frobenius((1,))

    def test_cyclotomic_arithmetic(self):
        q4 = cyc_rational(4)
        z = q4.generator()
        assert q4.mul(z, z) == q4.from_int(-1)
        assert q4.inverse(z) == q4.neg(z)

    def test_rational_from_fraction(self):
        q = rational()
        assert q.from_fraction(Fraction(1, 3)) == (Fraction(1, 3),)

    def test_monogenic_extension(self):
        base = zmod(3, 1)
        ext = monogenic_ext(base, [(1,), (0,), (1,)])
        x = ext.generator()
        assert ext.size == 9
        assert ext.mul(x, x) == ext.from_int(-1)

    def test_bad_prime_rejected(self):
        with pytest.raises(BadInput):
            trunc_iwasawa(4, 1, 2)
        with pytest.raises(BadInput):
            zmod(2, 1)

    def test_format(self, lam):
        x = lam.normalize([2, 1, 2])
        assert lam.format(x) == "2+1*T+2*T^2"
        assert lam.format(lam.zero) == "0"


# ═══════════════════════════════════════════
# Element Tests
# ═══════════════════════════════════════════


class TestRingElement:
    def test_operators(self, lam):
        t = RingElement.generator_of(lam)
        one_plus_t = 1 + t
        assert (one_plus_t * one_plus_t.inverse()) == 1
        assert (t**3).is_zero()
        assert (2 - t) == RingElement.of(lam, (2, 2, 0))

    def test_mixed_rings_rejected(self, lam, lam92):
        with pytest.raises(RingMismatch):
            RingElement.of(lam, 1) + RingElement.of(lam92, 1)


# ═══════════════════════════════════════════
# Morphism Tests
# ═══════════════════════════════════════════


class TestMorphisms:
    def test_arithmetic_prime(self, lam92):
        spec = arithmetic_prime_spec(0, lam92)
        assert spec.images == ((3,),)
        assert spec.check_homomorphism()
        assert spec(lam92.add(lam92.one, lam92.generator())) == (4,)

    def test_arithmetic_prime_needs_truncation(self):
        with pytest.raises(BadDomain):
            arithmetic_prime_spec(0, zmod(3, 2))

    def test_frobenius_automorphisms(self):
        autos = ring_automorphisms(finite_field(9))
        assert [a.label for a in autos] == ["id", "Frob^1"]
        assert all(a.check_homomorphism() for a in autos)

    def test_cyclotomic_galois_group(self):
        autos = ring_automorphisms(cyc_rational(12))
        assert len(autos) == 4
        assert autos[0].label == "id"

    def test_truncation_automorphisms_are_bijective(self, lam):
        autos = ring_automorphisms(lam)
        assert autos[0] == RingMorphism.identity(lam)
        assert all(a.is_bijective() for a in autos)
        assert len(autos) > 1

    def test_automorphism_limit(self, lam):
        with pytest.raises(TooLarge):
            ring_automorphisms(lam, limit=1)

    def test_search_cap(self, lam92):
        with pytest.raises(TooLarge):
            ring_automorphisms(lam92, search_cap=10)


# ═══════════════════════════════════════════
# p-adic Helper Tests
# ═══════════════════════════════════════════


class TestPAdic:
    def test_sqrt_one_plus_m(self):
        ring = trunc_iwasawa(3, 2, 3)
        x = RingElement.of(ring, (1, 1, 0))
        root = sqrt_one_plus_m(x)
        assert root * root == x
        assert (root - 1).is_nilpotent()

    def test_sqrt_rejects_units_outside_one_plus_m(self, lam):
        with pytest.raises(BadDomain):
            sqrt_one_plus_m(RingElement.of(lam, 2))

    def test_teichmuller(self):
        ring = zmod(3, 2)
        omega = teichmuller(RingElement.of(ring, 2))
        assert omega.coeffs == (8,)
        assert omega**3 == omega

    def test_kappa_of_one_plus_p(self, lam):
        assert kappa(4, lam).coeffs == (1, 1, 0)

    def test_kappa_rejects_multiples_of_p(self, lam):
        with pytest.raises(BadInput):
            kappa(6, lam)

    def test_beta_is_involution(self, lam):
        t = RingElement.generator_of(lam)
        assert beta_substitute(beta_substitute(t)) == t
        assert beta_substitute(t) != t
