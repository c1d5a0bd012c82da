"""Tests for the ring, group, q-expansion and table parsers."""

import pytest

from hida_fullness.errors import BadInput
from hida_fullness.forms.characters import chi_minus_4
from hida_fullness.groups.finite import cyclic_group
from hida_fullness.parsers.group_file import (
    format_group_file,
    parse_group_file,
    parse_matrix,
    parse_product_file,
)
from hida_fullness.parsers.qexp_csv import format_qexp_csv, parse_qexp_csv
from hida_fullness.parsers.ring_spec import parse_element, parse_ring_spec
from hida_fullness.parsers.tables import (
    format_cayley_csv,
    parse_cayley_csv,
    parse_character,
    parse_rep_file,
)
from hida_fullness.rings.descriptor import (
    RingKind,
    cyc_rational,
    finite_field,
    rational,
    trunc_iwasawa,
    zmod,
)

LAMBDA_SPEC = """\
# (Z/9)[T]/(T^2)
kind=trunc_iwasawa
p=3
a=2
b=2
"""

GAMMA_M = """\
# generators of a congruence subgroup
1,T;0,1
1,0;T,1
"""


# ═══════════════════════════════════════════
# Ring Specification Tests
# ═══════════════════════════════════════════


class TestRingSpec:
    def test_trunc_iwasawa_file(self):
        assert parse_ring_spec(LAMBDA_SPEC) == trunc_iwasawa(3, 2, 2)

    def test_inline_spec(self):
        assert parse_ring_spec("kind=zmod; p=5; a=2") == zmod(5, 2)
        assert parse_ring_spec("kind=zmod, p=5") == zmod(5, 1)

    def test_finite_field_and_cyclotomic(self):
        assert parse_ring_spec("kind=finite_field\nq=9") == finite_field(9)
        assert parse_ring_spec("kind=cyc_rational\nn=12") == cyc_rational(12)
        assert parse_ring_spec("kind=rational") == rational()

    def test_monogenic_extension(self):
        ring = parse_ring_spec("kind=monogenic_ext\nbase=zmod\np=3\next_poly=x^2+1")
        assert ring.kind is RingKind.MONOGENIC_EXT
        assert ring.size == 9

    def test_quotient(self):
        ring = parse_ring_spec(LAMBDA_SPEC.replace("trunc_iwasawa", "quotient") + "ideal=3\n")
        assert ring.kind is RingKind.QUOTIENT
        assert ring.size == 9

    def test_missing_kind(self):
        with pytest.raises(BadInput, match="kind="):
            parse_ring_spec("p=3")

    def test_unknown_kind(self):
        with pytest.raises(BadInput, match="unknown ring kind"):
            parse_ring_spec("kind=padic\np=3")

    def test_non_integer_key(self):
        with pytest.raises(BadInput, match="integer"):
            parse_ring_spec("kind=zmod\np=three")

    def test_missing_prime(self):
        with pytest.raises(BadInput, match="needs p="):
            parse_ring_spec("kind=trunc_iwasawa\nb=2")


# ═══════════════════════════════════════════
# Element Tests
# ═══════════════════════════════════════════


class TestElements:
    def test_polynomial_string(self):
        lam = trunc_iwasawa(3, 1, 3)
        assert parse_element("2+T+2*T^2", lam) == (2, 1, 2)
        assert parse_element("T^3", lam) == lam.zero
        assert parse_element("2T", lam) == (0, 2, 0)

    def test_fractions(self):
        ring = zmod(3, 1)
        assert parse_element("1/2", ring) == (2,)
        assert parse_element("-1", ring) == (2,)

    def test_non_unit_denominator(self):
        with pytest.raises(BadInput, match="not a unit"):
            parse_element("1/3", zmod(3, 2))

    def test_cyclotomic_variable(self):
        q4 = cyc_rational(4)
        assert parse_element("z^2", q4) == q4.from_int(-1)

    def test_unknown_variable(self):
        with pytest.raises(BadInput, match="unknown variables"):
            parse_element("y+1", trunc_iwasawa(3, 1, 2))


# ═══════════════════════════════════════════
# Group File Tests
# ═══════════════════════════════════════════


class TestGroupFile:
    def test_parse_generators(self):
        lam = trunc_iwasawa(3, 1, 2)
        gens = parse_group_file(GAMMA_M, lam)
        assert len(gens) == 2
        assert gens[0] == (lam.one, lam.generator(), lam.zero, lam.one)

    def test_determinant_checked(self):
        lam = trunc_iwasawa(3, 1, 2)
        with pytest.raises(BadInput, match="line 1: determinant"):
            parse_group_file("2,0;0,1\n", lam)
        assert len(parse_group_file("2,0;0,1\n", lam, require_sl2=False)) == 1

    def test_malformed_line(self):
        with pytest.raises(BadInput, match="line 2"):
            parse_group_file("1,0;0,1\n1,0,0;0,1\n", zmod(3, 1))

    def test_product_line_rejected(self):
        with pytest.raises(BadInput, match="goursat"):
            parse_group_file("1,0;0,1 | 1,0;0,1\n", zmod(3, 1))

    def test_product_file(self):
        ring = zmod(3, 1)
        gens = parse_product_file("1,1;0,1 | 1,0;1,1\n1,0;1,1 | 1,1;0,1\n", ring)
        assert len(gens) == 2
        assert all(len(g) == 2 for g in gens)
        with pytest.raises(BadInput, match="expected 2 factors"):
            parse_product_file("1,1;0,1 | 1,0;1,1\n1,0;1,1\n", ring)

    def test_format_reads_back(self):
        lam = trunc_iwasawa(3, 1, 2)
        gens = parse_group_file(GAMMA_M, lam)
        text = format_group_file(gens, lam, title="Gamma(T)")
        assert text.startswith("# Gamma(T)\n1,1*T;0,1\n")
        assert parse_group_file(text, lam) == gens

    def test_parse_matrix_needs_two_by_two(self):
        with pytest.raises(BadInput, match="2x2"):
            parse_matrix("1", zmod(3, 1))


# ═══════════════════════════════════════════
# q-Expansion CSV Tests
# ═══════════════════════════════════════════


class TestQExpCsv:
    CONTENT = "# level=11\n# weight=2\nn,value\n1,1\n2,-2\n3,-1\n"

    def test_parse(self):
        f = parse_qexp_csv(self.CONTENT)
        assert f.level == 11
        assert f.weight == 2
        assert [int(c[0]) for c in f.coeffs] == [1, -2, -1]

    def test_format(self):
        f = parse_qexp_csv(self.CONTENT, label="11a")
        assert format_qexp_csv(f) == "# level=11\n# weight=2\n# label=11a\nn,value\n1,1\n2,-2\n3,-1\n"

    def test_gap_in_indices(self):
        with pytest.raises(BadInput, match="expected n=2"):
            parse_qexp_csv("# level=11\n1,1\n3,5\n")

    def test_missing_level(self):
        with pytest.raises(BadInput, match="level=N"):
            parse_qexp_csv("1,1\n2,0\n")

    def test_empty_file(self):
        with pytest.raises(BadInput, match="no coefficients"):
            parse_qexp_csv("# level=11\n")

    def test_lambda_adic_values(self):
        lam = trunc_iwasawa(3, 1, 2)
        f = parse_qexp_csv("# level=1\n1,1\n2,1+T\n", ring=lam)
        assert f.is_lambda_adic
        assert f.a(2) == (1, 1)


# ═══════════════════════════════════════════
# Table Tests
# ═══════════════════════════════════════════


class TestTables:
    def test_character_file(self):
        chi = parse_character("modulus=4\n3: 1/2\n")
        assert chi.same_as(chi_minus_4())

    def test_character_needs_every_generator(self):
        with pytest.raises(BadInput, match="generators"):
            parse_character("modulus=12\n7: 1/2\n")

    def test_character_needs_modulus(self):
        with pytest.raises(BadInput, match="modulus="):
            parse_character("3: 1/2\n")

    def test_cayley_round_trip(self):
        c3 = cyclic_group(3)
        parsed = parse_cayley_csv(format_cayley_csv(c3), name="C3")
        assert parsed.order == 3
        assert parsed.table == c3.table

    def test_cayley_rejects_text(self):
        with pytest.raises(BadInput, match="not a list of integers"):
            parse_cayley_csv("0,a\n1,0\n")

    def test_rep_file(self):
        c4, f5 = cyclic_group(4), finite_field(5)
        rep = parse_rep_file("0: 1\n2: 4\n", c4, f5)
        assert rep.dim == 1
        assert rep.images[2] == (((4,),),)

    def test_rep_file_errors(self):
        c4, f5 = cyclic_group(4), finite_field(5)
        with pytest.raises(BadInput, match="not in a group"):
            parse_rep_file("7: 1\n", c4, f5)
        with pytest.raises(BadInput, match="different sizes"):
            parse_rep_file("0: 1\n2: 1,0;0,1\n", c4, f5)
