"""Tests for SL_2 matrix groups, congruence subgroups, Pink towers and fullness."""

import pytest

from hida_fullness.errors import (
    BadJ,
    CapExceeded,
    Degenerate,
    NotPGroup,
    NotTriangular,
    Unverified,
)
from hida_fullness.groups.congruence import (
    congruence_generators,
    congruence_level,
    congruence_subgroup,
    contains_congruence,
    is_subnormal,
    reduce_group,
    sl2,
)
from hida_fullness.groups.fullness import (
    ad_eigensplit,
    fullness_certificate,
    lambda_stability_check,
    sl2_twist,
)
from hida_fullness.groups.matrices import MatrixAlgebra
from hida_fullness.groups.matrix_group import enumerate_subgroup
from hida_fullness.groups.pink import lie_surjects, pink_tower, theta, verify_pink_theorem
from hida_fullness.groups.teichmuller import teichmuller_matrix_limit
from hida_fullness.lattices.ideals import (
    enumerate_ideals,
    ideal_power,
    ideal_times_sl2,
    matrix_span,
    maximal_ideal,
    principal,
)
from hida_fullness.rings.descriptor import trunc_iwasawa, zmod


@pytest.fixture
def lam():
    return trunc_iwasawa(3, 1, 3)


@pytest.fixture
def alg(lam):
    return MatrixAlgebra(lam)


@pytest.fixture
def gamma_t(lam):
    return congruence_subgroup(principal(lam, lam.generator()))


# ═══════════════════════════════════════════
# Matrix Algebra Tests
# ═══════════════════════════════════════════


class TestMatrixAlgebra:
    def test_inverse_and_det(self, lam, alg):
        t = lam.generator()
        x = alg.mul(alg.e12(t), alg.e21(lam.one))
        assert alg.det(x) == lam.one
        assert alg.mul(x, alg.inv(x)) == alg.identity

    def test_theta_is_trace_zero(self, lam, alg):
        x = alg.diag(lam.from_int(2), lam.from_int(2))
        assert alg.tr(theta(alg, x)) == lam.zero

    def test_commutator_of_commuting_elements(self, lam, alg):
        x = alg.e12(lam.one)
        y = alg.e12(lam.generator())
        assert alg.commutator(x, y) == alg.identity


# ═══════════════════════════════════════════
# Congruence Subgroup Tests
# ═══════════════════════════════════════════


class TestCongruence:
    def test_order_of_gamma_t(self, lam, alg, gamma_t):
        assert gamma_t.order == 9**3
        assert gamma_t.is_pgroup()
        assert gamma_t.contains(alg.e12(lam.generator()))
        assert not gamma_t.contains(alg.e12(lam.one))

    def test_generators_match_enumeration(self, lam, gamma_t):
        ideal = principal(lam, lam.generator())
        generated = enumerate_subgroup(lam, congruence_generators(ideal))
        assert generated.same_elements(gamma_t)

    def test_level_round_trip(self, lam):
        t2 = ideal_power(principal(lam, lam.generator()), 2)
        group = congruence_subgroup(t2)
        assert congruence_level(group) == t2
        assert contains_congruence(group, t2)

    def test_reduction_kills_gamma(self, lam, gamma_t):
        reduced = reduce_group(gamma_t, principal(lam, lam.generator()))
        assert reduced.order == 1

    def test_cap_exceeded_names_flag(self, lam):
        gens = congruence_generators(principal(lam, lam.generator()))
        with pytest.raises(CapExceeded, match="--cap"):
            enumerate_subgroup(lam, gens, cap=10)

    def test_sl2_membership_predicate(self, lam, alg):
        group = sl2(lam)
        assert group.contains(alg.e21(lam.from_int(2)))
        assert not group.contains(alg.diag(lam.from_int(2), lam.from_int(1)))

    def test_normal_subgroup_is_subnormal(self):
        ring = trunc_iwasawa(3, 1, 2)
        group = congruence_subgroup(maximal_ideal(ring))
        assert is_subnormal(group)

    def test_non_normal_cyclic_subgroup_is_not_subnormal(self):
        ring = zmod(5, 1)
        alg = MatrixAlgebra(ring)
        group = enumerate_subgroup(ring, [alg.matrix((0,), (4,), (1,), (0,))])
        assert group.order == 4
        assert not is_subnormal(group)

    def test_diagonal_torus_has_zero_level(self):
        ring = zmod(3, 1)
        alg = MatrixAlgebra(ring)
        torus = enumerate_subgroup(ring, [alg.diag((2,), (2,))])
        assert congruence_level(torus).is_zero()


# ═══════════════════════════════════════════
# Pink Tower Tests
# ═══════════════════════════════════════════


class TestPinkTower:
    def test_layers_of_gamma_t(self, gamma_t):
        data = pink_tower(gamma_t, depth=2)
        assert data.l1.size == 9**3
        assert data.c_trace.size == 3
        assert data.h(1).order == gamma_t.order
        assert data.layer(2).subset(data.l1)

    def test_gamma_t_is_normal_in_h1(self, gamma_t):
        verdict = verify_pink_theorem(gamma_t, depth=1)
        assert verdict.contained_in_h1
        assert verdict.normal_in_h1
        assert verdict.to_dict()["orders"]["H_1"] == 729

    def test_rejects_non_pgroup(self, lam, alg):
        group = enumerate_subgroup(lam, [alg.diag(lam.from_int(2), lam.from_int(2))])
        with pytest.raises(NotPGroup) as exc_info:
            pink_tower(group)
        assert exc_info.value.stage == "pink_tower"

    @pytest.mark.parametrize("b", [2, 3])
    def test_second_layer_of_congruence_subgroups(self, b):
        ring = trunc_iwasawa(3, 1, b)
        for ideal in enumerate_ideals(ring):
            if ideal.is_unit_ideal():
                continue
            layer2 = pink_tower(congruence_subgroup(ideal), depth=2, with_h=False).layer(2)
            assert layer2 == ideal_times_sl2(ideal_power(ideal, 2)), str(ideal)

    def test_lie_algebra_surjects_onto_reduction(self, lam, alg, gamma_t):
        t2 = ideal_power(principal(lam, lam.generator()), 2)
        reduced = reduce_group(gamma_t, t2)
        assert lie_surjects(gamma_t, reduced, layer=1)
        upper_only = enumerate_subgroup(lam, [alg.e12(lam.generator())])
        assert not lie_surjects(upper_only, reduced, layer=1)


# ═══════════════════════════════════════════
# Teichmüller Limit Tests
# ═══════════════════════════════════════════


class TestTeichmuller:
    def test_limit_conjugates_to_j(self):
        ring = zmod(3, 2)
        alg = MatrixAlgebra(ring)
        x = alg.matrix((1,), (1,), (0,), (2,))
        result = teichmuller_matrix_limit(x, ring)
        assert result.j == alg.diag((1,), (8,))
        assert alg.conj(result.conjugator, result.limit) == result.j

    def test_not_triangular(self):
        ring = zmod(3, 2)
        alg = MatrixAlgebra(ring)
        with pytest.raises(NotTriangular):
            teichmuller_matrix_limit(alg.e21((1,)), ring)

    def test_scalar_limit_needs_no_conjugation(self):
        ring = zmod(3, 2)
        alg = MatrixAlgebra(ring)
        x = alg.matrix((2,), (1,), (0,), (2,))
        result = teichmuller_matrix_limit(x, ring)
        assert result.limit == alg.scalar((8,))
        assert result.conjugator == alg.identity

    def test_failed_conjugation_is_unverified(self, monkeypatch):
        ring = zmod(3, 2)
        alg = MatrixAlgebra(ring)
        monkeypatch.setattr(MatrixAlgebra, "conj", lambda self, p, x: self.identity)
        with pytest.raises(Unverified) as excinfo:
            teichmuller_matrix_limit(alg.matrix((1,), (1,), (0,), (2,)), ring)
        assert excinfo.value.stage == "teichmuller_matrix_limit"


# ═══════════════════════════════════════════
# Fullness Tests
# ═══════════════════════════════════════════


class TestFullness:
    def test_bad_j_rejected(self, lam, alg, gamma_t):
        data = pink_tower(gamma_t, depth=2, with_h=False)
        with pytest.raises(BadJ):
            ad_eigensplit(data.l1, alg.identity, lam)

    def test_eigensplit_of_gamma_t(self, lam, alg, gamma_t):
        data = pink_tower(gamma_t, depth=2, with_h=False)
        split = ad_eigensplit(data.l1, alg.diag(lam.one, lam.from_int(2)), lam)
        assert split.shape == "alpha=-1"
        assert split.upper.size == 9

    def test_lambda_stability_of_ideal_lattices(self, lam):
        for ideal in enumerate_ideals(lam):
            assert lambda_stability_check(ideal_times_sl2(ideal), lam), str(ideal)

    def test_lambda_stability_of_second_layer(self, lam, gamma_t):
        layer2 = pink_tower(gamma_t, depth=2, with_h=False).layer(2)
        assert lambda_stability_check(layer2, lam)

    def test_single_upper_element_is_not_lambda_stable(self):
        ring = trunc_iwasawa(3, 1, 2)
        alg = MatrixAlgebra(ring)
        lattice = matrix_span(ring, [alg.flatten(alg.e12(ring.one))])
        assert not lambda_stability_check(lattice, ring)

    def test_sl2_twist_has_determinant_one(self, lam, alg):
        x = alg.diag(lam.add(lam.one, lam.generator()), lam.one)
        ((label, twisted), (_, same)) = sl2_twist([("h", x), ("e", alg.e12(lam.one))], lam)
        assert label == "h"
        assert alg.det(twisted) == lam.one
        assert same == alg.e12(lam.one)

    def test_certificate_on_first_layer(self, lam, alg, gamma_t):
        t = principal(lam, lam.generator())
        certificate = fullness_certificate(gamma_t, alg.diag(lam.one, lam.from_int(2)))
        assert certificate.verified
        assert certificate.layer == 1
        assert certificate.ideal == ideal_power(t, 2)
        assert certificate.ideal.subset(t)
        assert ("lie_containment", "vacuous: a_0^2 = 0") in certificate.pipeline_trace

    def test_second_layer_is_too_shallow(self, lam, alg, gamma_t):
        with pytest.raises(Degenerate) as exc_info:
            fullness_certificate(gamma_t, alg.diag(lam.one, lam.from_int(2)), layer=2)
        assert exc_info.value.stage == "nilpotent_ideals"

    def test_shallow_truncation_is_degenerate(self):
        ring = trunc_iwasawa(3, 1, 2)
        alg = MatrixAlgebra(ring)
        group = congruence_subgroup(principal(ring, ring.generator()))
        with pytest.raises(Degenerate) as exc_info:
            fullness_certificate(group, alg.diag(ring.one, ring.from_int(2)))
        assert exc_info.value.stage == "nilpotent_ideals"

    @pytest.mark.slow
    def test_certificate_for_gamma_m(self):
        ring = trunc_iwasawa(3, 2, 2)
        alg = MatrixAlgebra(ring)
        group = congruence_subgroup(maximal_ideal(ring))
        certificate = fullness_certificate(group, alg.diag(ring.one, ring.from_int(8)))
        assert certificate.verified
        assert not certificate.ideal.is_zero()
        stages = [stage for stage, _ in certificate.pipeline_trace]
        assert stages[0] == "pink_tower"
        assert stages[-1] == "confirm_containment"
        inner = congruence_subgroup(certificate.ideal)
        assert group.contains_all(inner.elements)
