"""Tests for table groups, Goursat decompositions, obstructions, cocycles and descent."""

import pytest

from hida_fullness.errors import BadInput, NotRegular, NotSemisimple, TooLarge
from hida_fullness.groups.cocycles import Cocycle2, split_tsigma_cocycle
from hida_fullness.groups.descent import (
    centralizer_classify,
    field_embedding,
    twisted_invariants,
)
from hida_fullness.groups.finite import (
    FiniteGroup,
    cyclic_group,
    direct_product,
    quaternion_group,
    symmetric_group,
)
from hida_fullness.groups.goursat import (
    ProductSubgroup,
    goursat,
    graph_subgroup,
    pairwise_implies_product,
)
from hida_fullness.groups.obstruction import (
    FiniteRep,
    brute_force_extensions,
    extend_rep,
    obstruction_class,
)
from hida_fullness.rings.descriptor import finite_field, trunc_iwasawa
from hida_fullness.rings.morphism import ring_automorphisms


def one_dim(field, group, values):
    return FiniteRep(group, field, 1, {g: ((field.from_int(v),),) for g, v in values.items()})


@pytest.fixture
def a5():
    return FiniteGroup.from_generators(
        [(1, 2, 0, 3, 4), (0, 1, 3, 4, 2)],
        lambda p, q: tuple(p[i] for i in q),
        tuple(range(5)),
        name="A5",
    )


# ═══════════════════════════════════════════
# Table Group Tests
# ═══════════════════════════════════════════


class TestFiniteGroup:
    def test_cyclic(self):
        c6 = cyclic_group(6)
        assert c6.order == 6
        assert c6.element_order(1) == 6
        assert c6.power(1, 7) == 1
        assert c6.is_abelian()

    def test_symmetric_group(self):
        s3 = symmetric_group(3)
        assert s3.order == 6
        assert not s3.is_abelian()
        assert len(s3.derived_subgroup()) == 3
        assert s3.center() == frozenset({0})

    def test_subgroups_of_small_index(self):
        s3 = symmetric_group(3)
        assert len(s3.subgroups(6)) == 6
        assert [len(u) for u in s3.subgroups(2)] == [3, 6]
        assert s3.subgroups(1) == [frozenset(s3.elements)]

    def test_subgroup_limit(self, a5):
        with pytest.raises(TooLarge):
            a5.subgroups(60, limit=5)

    def test_derived_subgroup_of_a_subgroup(self, a5):
        a3 = symmetric_group(3).derived_subgroup()
        assert symmetric_group(3).derived_subgroup(a3) == frozenset({0})
        assert a5.derived_subgroup() == frozenset(a5.elements)

    def test_quaternion_group(self):
        q8 = quaternion_group()
        assert q8.order == 8
        assert len(q8.center()) == 2
        assert q8.derived_subgroup() == q8.center()

    def test_quotient(self):
        s3 = symmetric_group(3)
        quotient, projection = s3.quotient(s3.derived_subgroup())
        assert quotient.order == 2
        assert projection[0] == 0

    def test_quotient_needs_normal_subgroup(self):
        s3 = symmetric_group(3)
        t = next(g for g in s3.elements if s3.element_order(g) == 2)
        with pytest.raises(BadInput):
            s3.quotient({0, t})

    def test_from_table_rejects_non_group(self):
        with pytest.raises(BadInput):
            FiniteGroup.from_table([[0, 1], [1, 1]])

    def test_direct_product(self):
        g = direct_product(cyclic_group(2), cyclic_group(3))
        assert g.order == 6
        assert g.is_abelian()

    def test_characters(self):
        chars = cyclic_group(3).characters(finite_field(7))
        assert len(chars) == 3
        assert all(v == (1,) for v in chars[0].values())


# ═══════════════════════════════════════════
# Goursat Tests
# ═══════════════════════════════════════════


class TestGoursat:
    def test_graph_of_identity(self):
        c2 = cyclic_group(2)
        data = goursat(graph_subgroup(c2, c2, {0: 0, 1: 1}))
        assert len(data.n1) == 1 and len(data.n2) == 1
        assert data.iso == {0: 0, 1: 1}

    def test_full_product(self):
        c2, c3 = cyclic_group(2), cyclic_group(3)
        subgroup = ProductSubgroup((c2, c3), ((1, 0), (0, 1)))
        data = goursat(subgroup)
        assert len(data.n1) == 2 and len(data.n2) == 3
        assert data.iso is None
        assert len(data.coset_map) == 1

    def test_graph_recovers_subgroup(self):
        s3 = symmetric_group(3)
        subgroup = graph_subgroup(s3, s3, {g: g for g in s3.elements})
        data = goursat(subgroup)
        assert data.graph(s3, s3) == set(subgroup.members())

    def test_pairwise_diagonal_is_not_surjective(self, a5):
        diagonal = ProductSubgroup((a5, a5, a5), tuple((g, g, g) for g in a5.generators()))
        report = pairwise_implies_product(diagonal)
        assert report.hypothesis_holds
        assert not report.pairwise_surjective
        assert report.witness_pair == (0, 1)
        assert report.is_full_product is None

    def test_pairwise_full_product(self):
        c2 = cyclic_group(2)
        subgroup = ProductSubgroup((c2, c2, c2), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        report = pairwise_implies_product(subgroup, 2)
        assert report.pairwise_surjective
        assert report.is_full_product
        assert report.surrogate == "index<=2"

    def test_commutator_hypothesis(self):
        s3 = symmetric_group(3)
        gens = tuple((g, 0, 0) for g in s3.generators())
        report = pairwise_implies_product(ProductSubgroup((s3, s3, s3), gens))
        assert not report.hypothesis_holds

    def test_hypothesis_checks_small_index_subgroups(self):
        # S3 itself passes at index 2, its subgroup A3 does not
        s3 = symmetric_group(3)
        gens = tuple((g, g, g) for g in s3.generators())
        report = pairwise_implies_product(ProductSubgroup((s3, s3, s3), gens), 2)
        assert not report.hypothesis_holds

    def test_needs_three_factors(self):
        s3 = symmetric_group(3)
        with pytest.raises(BadInput, match="three factors"):
            pairwise_implies_product(graph_subgroup(s3, s3, {g: g for g in s3.elements}))

    def test_product_cap(self):
        s3 = symmetric_group(3)
        with pytest.raises(TooLarge):
            pairwise_implies_product(ProductSubgroup((s3, s3, s3), ()), cap=10)


# ═══════════════════════════════════════════
# Obstruction Tests
# ═══════════════════════════════════════════


class TestObstruction:
    def test_c2_in_c4_extends_over_f5(self):
        c4, f5 = cyclic_group(4), finite_field(5)
        r = one_dim(f5, c4, {0: 1, 2: -1})
        result = obstruction_class(r, c4)
        assert result.vanishes
        extensions = extend_rep(r, c4, result)
        assert len(extensions) == 2
        assert len(brute_force_extensions(r, c4)) == 2

    def test_c2_in_c4_obstructed_over_f7(self):
        c4, f7 = cyclic_group(4), finite_field(7)
        r = one_dim(f7, c4, {0: 1, 2: -1})
        result = obstruction_class(r, c4)
        assert not result.vanishes
        assert brute_force_extensions(r, c4) == []

    def test_quaternion_centre_obstructed(self):
        q8, f5 = quaternion_group(), finite_field(5)
        (z,) = sorted(q8.center() - {0})
        r = one_dim(f5, q8, {0: 1, z: -1})
        assert not obstruction_class(r, q8).vanishes

    def test_non_normal_subgroup_rejected(self):
        s3, f7 = symmetric_group(3), finite_field(7)
        t = next(g for g in s3.elements if s3.element_order(g) == 2)
        r = one_dim(f7, s3, {0: 1, t: -1})
        with pytest.raises(BadInput):
            obstruction_class(r, s3)


# ═══════════════════════════════════════════
# Cocycle Tests
# ═══════════════════════════════════════════


class TestCocycles:
    def test_split_square_class(self):
        c2 = cyclic_group(2)
        ring = trunc_iwasawa(3, 1, 3)
        values = {(g, h): ring.one for g in c2.elements for h in c2.elements}
        values[(1, 1)] = ring.add(ring.one, ring.generator())
        b = Cocycle2(c2, ring, values)
        assert b.is_cocycle()
        splitting = split_tsigma_cocycle(b)
        assert b.is_split_by(splitting.zeta)

    def test_not_a_cocycle(self):
        c3 = cyclic_group(3)
        ring = trunc_iwasawa(3, 1, 3)
        values = {(g, h): ring.one for g in c3.elements for h in c3.elements}
        values[(1, 1)] = ring.add(ring.one, ring.generator())
        assert not Cocycle2(c3, ring, values).is_cocycle()

    def test_p_dividing_group_order(self):
        c3 = cyclic_group(3)
        ring = trunc_iwasawa(3, 1, 3)
        values = {(g, h): ring.one for g in c3.elements for h in c3.elements}
        with pytest.raises(BadInput):
            split_tsigma_cocycle(Cocycle2(c3, ring, values))


# ═══════════════════════════════════════════
# Descent Tests
# ═══════════════════════════════════════════


class TestDescent:
    def test_prime_field_embedding(self):
        emb = field_embedding(finite_field(3), finite_field(9))
        assert emb.check_homomorphism()

    def test_embedding_needs_compatible_fields(self):
        with pytest.raises(BadInput):
            field_embedding(finite_field(9), finite_field(27))

    def test_split_torus(self):
        f5 = finite_field(5)
        report = centralizer_classify([((f5.one, f5.zero), (f5.zero, f5.from_int(2)))], f5)
        assert report.case == 3
        assert report.commutant_dim == 2

    def test_nonsplit_torus(self):
        f3 = finite_field(3)
        i = ((f3.zero, f3.one), (f3.from_int(2), f3.zero))
        report = centralizer_classify([i], f3)
        assert report.case == 2

    def test_scalar_image(self):
        f5 = finite_field(5)
        with pytest.raises(NotRegular):
            centralizer_classify([((f5.one, f5.zero), (f5.zero, f5.one))], f5)

    def test_unipotent_image(self):
        f5 = finite_field(5)
        with pytest.raises(NotSemisimple):
            centralizer_classify([((f5.one, f5.one), (f5.zero, f5.one))], f5)

    def test_frobenius_invariants(self):
        f9 = finite_field(9)
        frob = ring_automorphisms(f9)[1]
        result = twisted_invariants(f9, f9.one, frob)
        assert result.order == 2
        assert result.fixed_field_size == 3
        assert result.dimension_one

    def test_norm_must_be_one(self):
        f9 = finite_field(9)
        frob = ring_automorphisms(f9)[1]
        with pytest.raises(BadInput):
            twisted_invariants(f9, f9.generator(), frob)
