"""Tests for Howell lattices and ideal arithmetic."""

import pytest

from hida_fullness.errors import Degenerate, TooLarge
from hida_fullness.lattices.howell import SubLattice, kernel_lattice, solve_left
from hida_fullness.lattices.ideals import (
    IdealHandle,
    enumerate_ideals,
    ideal_intersection,
    ideal_power,
    ideal_product,
    ideal_sum,
    lattice_to_ideal,
    maximal_ideal,
    morphism_kernel,
    principal,
    unit_ideal,
    zero_ideal,
)
from hida_fullness.rings.descriptor import trunc_iwasawa
from hida_fullness.rings.morphism import arithmetic_prime_spec


@pytest.fixture
def lam():
    return trunc_iwasawa(3, 1, 3)


# ═══════════════════════════════════════════
# Howell Form Tests
# ═══════════════════════════════════════════


class TestSubLattice:
    def test_cyclic_span(self):
        lat = SubLattice.span([[3]], 9, 1)
        assert lat.size == 3
        assert lat.contains([6])
        assert not lat.contains([1])

    def test_howell_property_membership(self):
        lat = SubLattice.span([[2, 1]], 4, 2)
        assert lat.size == 4
        assert lat.contains([0, 2])
        assert not lat.contains([0, 1])

    def test_basis_is_canonical(self):
        first = SubLattice.span([[2, 1]], 4, 2)
        second = SubLattice.span([[2, 3], [0, 2]], 4, 2)
        assert first.basis == second.basis

    def test_elements_are_distinct(self):
        lat = SubLattice.span([[3, 0], [0, 1]], 9, 2)
        elements = list(lat.elements())
        assert len(elements) == lat.size == 27
        assert len(set(elements)) == 27

    def test_join_and_intersect(self):
        diagonal = SubLattice.span([[1, 1]], 9, 2)
        axis = SubLattice.span([[1, 0]], 9, 2)
        assert diagonal.intersect(axis).is_zero()
        assert diagonal.join(axis) == SubLattice.full(9, 2)

    def test_subset(self):
        small = SubLattice.span([[3, 3]], 9, 2)
        big = SubLattice.span([[1, 1]], 9, 2)
        assert small.subset(big)
        assert not big.subset(small)

    def test_incompatible_lattices(self):
        with pytest.raises(ValueError, match="incompatible"):
            SubLattice.full(9, 2).join(SubLattice.full(3, 2))

    def test_kernel_lattice(self):
        kernel = kernel_lattice([[3]], [], 9)
        assert kernel.size == 3
        assert kernel.contains([3])

    def test_solve_left(self):
        c = solve_left([[2]], [], [1], 9)
        assert c is not None
        assert (2 * c[0]) % 9 == 1
        assert solve_left([[3]], [], [1], 9) is None


# ═══════════════════════════════════════════
# Ideal Tests
# ═══════════════════════════════════════════


class TestIdeals:
    def test_chain_of_ideals(self, lam):
        ideals = enumerate_ideals(lam)
        assert [i.size for i in ideals] == [1, 3, 9, 27]
        assert ideals[0] == zero_ideal(lam)
        assert ideals[-1] == unit_ideal(lam)

    def test_enumeration_limit(self, lam):
        with pytest.raises(TooLarge):
            enumerate_ideals(lam, limit=10)

    def test_maximal_ideal(self, lam):
        m = maximal_ideal(lam)
        assert m == principal(lam, lam.generator())
        assert m.size == 9
        assert not m.is_unit_ideal()

    def test_products_and_powers(self, lam):
        t = principal(lam, lam.generator())
        assert ideal_product(t, t).size == 3
        assert ideal_power(t, 3).is_zero()
        assert ideal_power(t, 0).is_unit_ideal()

    def test_sum_and_intersection(self, lam):
        t = principal(lam, lam.generator())
        t2 = ideal_power(t, 2)
        assert ideal_sum(t, t2) == t
        assert ideal_intersection(t, t2) == t2
        assert t2.subset(t)

    def test_non_ideal_lattice(self, lam):
        constants = IdealHandle(lam, SubLattice.span([(1, 0, 0)], 3, 3))
        assert not constants.is_ideal()
        assert maximal_ideal(lam).is_ideal()

    def test_lattice_to_ideal_of_an_ideal(self, lam):
        t = principal(lam, lam.generator())
        assert lattice_to_ideal(t.lattice, lam) == t

    def test_lattice_to_ideal_of_an_order(self, lam):
        order = SubLattice.span([(1, 0, 0), (0, 0, 1)], 3, 3)
        ideal = lattice_to_ideal(order, lam)
        assert ideal == principal(lam, (0, 0, 1))
        assert ideal.lattice.subset(order)

    def test_lattice_to_ideal_zero(self, lam):
        with pytest.raises(Degenerate):
            lattice_to_ideal(SubLattice.zero(3, 3), lam)

    @pytest.mark.parametrize("rows", [[(1, 0, 0)], [(1, 0, 0), (0, 1, 0)]])
    def test_lattice_without_an_ideal_is_degenerate(self, lam, rows):
        with pytest.raises(Degenerate, match="zero ideal"):
            lattice_to_ideal(SubLattice.span(rows, 3, 3), lam)

    def test_lattice_containing_an_ideal(self, lam):
        t2 = principal(lam, (0, 0, 1))
        module = SubLattice.span([(1, 0, 0), (1, 1, 0), *t2.lattice.basis], 3, 3)
        ideal = lattice_to_ideal(module, lam)
        assert t2.subset(ideal)
        assert ideal.lattice.subset(module)

    def test_morphism_kernel(self):
        ring = trunc_iwasawa(3, 2, 2)
        kernel = morphism_kernel(arithmetic_prime_spec(0, ring))
        assert kernel.size == 9
        assert kernel.contains((6, 1))
        assert not kernel.contains(ring.generator())
