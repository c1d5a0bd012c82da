"""Tests for the bundled acceptance suite."""

import pytest
from rich.console import Console

from hida_fullness.core.config import Limits
from hida_fullness.core.selftest import (
    CHECKS,
    RANDOM_LATTICES,
    Verdict,
    print_results,
    random_modules,
    run_selftest,
)
from hida_fullness.lattices.ideals import enumerate_ideals
from hida_fullness.rings.descriptor import trunc_iwasawa


class TestSelftest:
    def test_every_criterion_is_numbered(self):
        assert len(CHECKS) == 11

    def test_cocycles(self):
        (result,) = run_selftest(Limits(), [10])
        assert result.number == 10
        assert result.verdict is Verdict.PASS, result.detail

    def test_lattice_to_ideal(self):
        (result,) = run_selftest(Limits(), [5])
        assert result.verdict is Verdict.PASS, result.detail

    def test_random_modules_contain_one_and_an_ideal(self):
        ring = trunc_iwasawa(3, 1, 3)
        nonzero = [a for a in enumerate_ideals(ring) if not a.is_zero()]
        modules = random_modules(ring, RANDOM_LATTICES, Limits())
        assert len(modules) == RANDOM_LATTICES
        for module in modules:
            assert module.contains(ring.one)
            assert any(a.lattice.subset(module) for a in nonzero)

    def test_small_cap_skips(self):
        (result,) = run_selftest(Limits(enumeration_cap=5), [2])
        assert result.verdict is Verdict.SKIP

    def test_results_table(self):
        console = Console(record=True, width=120)
        print_results(run_selftest(Limits(), [10]), console)
        assert "cocycles" in console.export_text()


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, len(CHECKS) + 1))
def test_acceptance_criterion(number):
    (result,) = run_selftest(Limits(), [number])
    assert result.verdict is Verdict.PASS, f"{result.name}: {result.detail}"
