"""
Selftest — the bundled acceptance suite.

Each check returns a short detail string on success and raises
``CheckFailed`` otherwise. A check that runs into an enumeration or search
cap is reported as SKIP, never FAIL, so reduced-cap runs stay green.
"""

import asyncio
import logging
import random
import tempfile
import time
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from rich.console import Console
from rich.table import Table
from sympy import prime, primerange

from hida_fullness.core.config import Limits
from hida_fullness.errors import HidaFullnessError, TooLarge
from hida_fullness.exporters.json_export import dumps
from hida_fullness.forms.characters import (
    DirichletCharacter,
    chi_minus_4,
    primitive_characters,
    ribet_cocycle_table,
)
from hida_fullness.forms.eta import eta_product_expand
from hida_fullness.forms.qexpansion import QExpansion, character_value, hecke_T
from hida_fullness.forms.twists import build_fM, detect_self_twists, m_level, twist_map
from hida_fullness.groups.cocycles import Cocycle2, split_tsigma_cocycle
from hida_fullness.groups.congruence import (
    congruence_generators,
    congruence_level,
    congruence_subgroup,
    contains_congruence,
)
from hida_fullness.groups.finite import (
    FiniteGroup,
    cyclic_group,
    quaternion_group,
    symmetric_group,
)
from hida_fullness.groups.fullness import fullness_certificate
from hida_fullness.groups.goursat import (
    goursat,
    graph_subgroup,
    merzljakov_search,
    merzljakov_verify,
)
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import MatrixGroup, enumerate_subgroup
from hida_fullness.groups.obstruction import (
    FiniteRep,
    brute_force_extensions,
    extend_rep,
    obstruction_class,
)
from hida_fullness.groups.pink import pink_tower, verify_pink_theorem
from hida_fullness.lattices.howell import SubLattice
from hida_fullness.lattices.ideals import (
    IdealHandle,
    enumerate_ideals,
    ideal_power,
    ideal_times_sl2,
    lattice_to_ideal,
    maximal_ideal,
)
from hida_fullness.models.job import Command, JobConfig
from hida_fullness.parsers.group_file import format_group_file
from hida_fullness.rings.descriptor import RingDescriptor, cyc_rational, finite_field, trunc_iwasawa
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.morphism import RingMorphism, ring_automorphisms
from hida_fullness.rings.padic import sqrt_one_plus_m

logger = logging.getLogger(__name__)

SEED = 20240601
RANDOM_GROUPS = 25
RANDOM_LATTICES = 100


class CheckFailed(AssertionError):
    """An acceptance property did not hold."""


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


@dataclass
class CheckResult:
    number: int
    name: str
    verdict: Verdict
    detail: str
    seconds: float

    def to_dict(self) -> dict[str, object]:
        return {
            "number": self.number,
            "name": self.name,
            "verdict": self.verdict.value,
            "detail": self.detail,
        }


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailed(message)


def _within(start: float, budget: float, what: str) -> float:
    elapsed = time.perf_counter() - start
    _require(elapsed < budget, f"{what} took {elapsed:.1f}s, budget {budget:.0f}s")
    return elapsed


# ──────────────────────────────────────────────
# Shared data
# ──────────────────────────────────────────────


def acceptance_rings() -> list[RingDescriptor]:
    """F_3[T]/(T^3) and (Z/9)[T]/(T^2)."""
    return [trunc_iwasawa(3, 1, 3), trunc_iwasawa(3, 2, 2)]


def proper_ideals(ring: RingDescriptor, limits: Limits) -> list[IdealHandle]:
    return [a for a in enumerate_ideals(ring, limits.ideal_ring_bound) if not a.is_unit_ideal()]


def random_pgroups(count: int, limits: Limits, seed: int = SEED) -> list[MatrixGroup]:
    """Two-generator subgroups of Γ(m) ⊂ SL_2(F_3[T]/(T^2))."""
    ring = trunc_iwasawa(3, 1, 2)
    pool = congruence_subgroup(maximal_ideal(ring), limits.enumeration_cap).elements
    rng = random.Random(seed)
    out = []
    for i in range(count):
        x, y = rng.choice(pool), rng.choice(pool)
        out.append(enumerate_subgroup(ring, [x, y], limits.enumeration_cap, label=f"random_{i}"))
    return out


# ──────────────────────────────────────────────
# Checks
# ──────────────────────────────────────────────


def check_pink_law(limits: Limits) -> str:
    start = time.perf_counter()
    count = 0
    for ring in acceptance_rings():
        for a in proper_ideals(ring, limits):
            group = congruence_subgroup(a, limits.enumeration_cap)
            l2 = pink_tower(group, 2, limits.enumeration_cap, with_h=False).layer(2)
            _require(
                l2 == ideal_times_sl2(ideal_power(a, 2)),
                f"L_2(Γ{a}) != a^2·sl_2 over {ring}",
            )
            count += 1
    elapsed = _within(start, 120, "Pink law")
    return f"{count} ideals in {elapsed:.1f}s"


def check_pink_theorem(limits: Limits) -> str:
    start = time.perf_counter()
    for group in random_pgroups(RANDOM_GROUPS, limits):
        verdict = verify_pink_theorem(group, 3, limits.enumeration_cap)
        _require(verdict.passed, f"{group.label}: {verdict.to_dict()}")
    elapsed = _within(start, 300, "Pink theorem")
    return f"{RANDOM_GROUPS} random groups in {elapsed:.1f}s"


def check_congruence_level(limits: Limits) -> str:
    count = 0
    for ring in acceptance_rings():
        for a in proper_ideals(ring, limits):
            group = congruence_subgroup(a, limits.enumeration_cap)
            _require(congruence_level(group) == a, f"level of Γ{a} over {ring} is not {a}")
            count += 1
    for group in random_pgroups(RANDOM_GROUPS, limits):
        level = congruence_level(group)
        _require(contains_congruence(group, level), f"Γ{level} is not inside {group.label}")
    return f"{count} round trips, {RANDOM_GROUPS} suite groups"


def check_fullness(limits: Limits) -> str:
    ring = trunc_iwasawa(3, 2, 2)
    alg = MatrixAlgebra(ring)
    group = congruence_subgroup(maximal_ideal(ring), limits.enumeration_cap)
    j = alg.diag(ring.one, ring.from_int(8))
    certificate = fullness_certificate(group, j, cap=limits.enumeration_cap)
    a0 = certificate.ideal
    _require(certificate.verified and not a0.is_zero(), "certificate is zero or unverified")
    inner = congruence_subgroup(a0, limits.enumeration_cap)
    _require(group.contains_all(inner.elements), f"Γ{a0} is not contained in G")
    return f"a0 = {a0}, |Γ(a0)| = {inner.order}"


def random_modules(
    ring: RingDescriptor, count: int, limits: Limits, seed: int = SEED
) -> list[SubLattice]:
    """Unit-containing submodules of A that also contain a nonzero ideal of A."""
    rng = random.Random(seed)
    elements = list(ring.elements())
    ideals = [a for a in enumerate_ideals(ring, limits.ideal_ring_bound) if not a.is_zero()]
    modules = []
    for _ in range(count):
        extra = [rng.choice(elements) for _ in range(rng.randint(0, 2))]
        inside = rng.choice(ideals)
        rows = [ring.one, *extra, *inside.lattice.basis]
        modules.append(SubLattice.span(rows, ring.modulus, ring.rank))
    return modules


def check_lattice_to_ideal(limits: Limits, seed: int = SEED) -> str:
    ring = trunc_iwasawa(3, 1, 3)
    for i, module in enumerate(random_modules(ring, RANDOM_LATTICES, limits, seed)):
        ideal = lattice_to_ideal(module, ring)
        _require(not ideal.is_zero(), f"lattice {i} gave the zero ideal")
        _require(
            all(module.contains(x) for x in ideal.elements()),
            f"lattice {i}: {ideal} is not inside {module.to_rows()}",
        )
    return f"{RANDOM_LATTICES} lattices"


def _entrywise(sigma: RingMorphism, x: Matrix) -> Matrix:
    return (sigma(x[0]), sigma(x[1]), sigma(x[2]), sigma(x[3]))


def check_goursat(limits: Limits) -> str:
    ring = trunc_iwasawa(3, 1, 2)
    alg = MatrixAlgebra(ring)
    table = FiniteGroup.from_generators(
        congruence_generators(maximal_ideal(ring)), alg.mul, alg.identity, limits.enumeration_cap
    )
    autos = ring_automorphisms(ring, limits.automorphism_limit, limits.search_cap)
    for sigma in autos:
        mapping = {i: table.index_of(_entrywise(sigma, x)) for i, x in enumerate(table.labels)}
        data = goursat(graph_subgroup(table, table, mapping), limits.enumeration_cap)
        _require(len(data.n1) == 1 and len(data.n2) == 1, f"{sigma.label}: kernels not trivial")
        _require(data.iso == mapping, f"{sigma.label}: recovered map differs")
        iso = {table.labels[x]: table.labels[y] for x, y in mapping.items()}
        form = merzljakov_search(iso, ring, limits.automorphism_limit, limits.search_cap)
        _require(
            merzljakov_verify(iso, form.eta, form.y, form.sigma),
            f"{sigma.label}: Merzljakov form does not reproduce the graph",
        )
    return f"{len(autos)} automorphisms on a group of order {table.order}"


def check_obstruction(limits: Limits) -> str:
    start = time.perf_counter()
    s3, f7 = symmetric_group(3), finite_field(7)
    c = next(g for g in s3.elements if s3.element_order(g) == 3)
    images = {
        s3.power(c, k): (
            (f7.from_int(2**k), f7.zero),
            (f7.zero, f7.from_int(4**k)),
        )
        for k in range(3)
    }
    r = FiniteRep(s3, f7, 2, images)
    result = obstruction_class(r, s3, limits.search_cap)
    _require(result.vanishes, "Ob(r) should vanish for C3 ⊂ S3")
    extensions = extend_rep(r, s3, result)
    _require(bool(extensions), "no extension constructed for C3 ⊂ S3")

    q8, f5 = quaternion_group(), finite_field(5)
    (z,) = sorted(q8.center() - {0})
    r = FiniteRep(q8, f5, 1, {0: ((f5.one,),), z: ((f5.from_int(-1),),)})
    result = obstruction_class(r, q8, limits.search_cap)
    _require(not result.vanishes, "Ob(r) should not vanish for Z(Q8) ⊂ Q8")
    _require(
        not brute_force_extensions(r, q8, limits.search_cap),
        "exhaustive search found an extension for Z(Q8) ⊂ Q8",
    )
    _within(start, 10, "obstruction examples")
    return f"{len(extensions)} extensions for C3 ⊂ S3; Q8 obstructed"


def _quadratic_primitive(bound: int) -> list[DirichletCharacter]:
    return [chi for chi in primitive_characters(bound) if chi.order == 2]


def _delta(precision: int = 200) -> QExpansion:
    return eta_product_expand([(1, 24)], precision)


def check_hecke_twist(limits: Limits) -> str:
    f = _delta()
    ring = f.ring
    etas = _quadratic_primitive(8)
    for eta in etas:
        level = m_level(f.nebentypus, eta, f.level)
        twisted = twist_map(f, eta, level)
        for n in range(1, 51):
            left = hecke_T(twisted, n)
            right = twist_map(hecke_T(f, n), eta, level).scale(character_value(eta, n, ring))
            _require(left.agrees_with(right), f"T({n}) and R_{eta.label()} do not commute")

    g = build_fM(f, 1, 6)
    for ell in (2, 3):
        killed = hecke_T(g, ell)
        _require(all(ring.is_zero(c) for c in killed.coeffs), f"f_M|T({ell}) != 0")

    a = trunc_iwasawa(3, 1, 3)
    ones = [x for x in a.elements() if a.in_maximal_ideal(a.sub(x, a.one))]
    for x in ones:
        root = sqrt_one_plus_m(RingElement(a, x))
        _require((root * root).coeffs == x, f"sqrt({a.format(x)})^2 != x")
    return f"{len(etas)} quadratic twists, f_M at level 6, {len(ones)} square roots"


def check_twist_detection(limits: Limits) -> str:
    primes = [prime(i) for i in range(1, 26)]
    delta = detect_self_twists(_delta(), 8, primes, search_cap=limits.search_cap)
    _require(len(delta.detected) == 1, f"Δ: expected one pair, got {len(delta.detected)}")
    (pair,) = delta.detected
    _require(pair.eta.is_trivial() and pair.is_inner, "Δ: the pair is not (id, 1)")
    _require(not delta.cm_flag, "Δ has cm_flag set")

    f = eta_product_expand([(4, 2), (8, 2)], 200)
    report = detect_self_twists(f, 8, primes, search_cap=limits.search_cap)
    _require(
        any(p.is_inner and p.eta.same_as(chi_minus_4()) for p in report.detected),
        "level 32: (id, χ₋₄) not detected",
    )
    _require(report.cm_flag, "level 32: cm_flag not set")
    for p in primerange(3, 200):
        if p % 4 == 3:
            _require(f.ring.is_zero(f.a(p)), f"level 32: a({p}) != 0")
    return f"Δ: 1 pair; level {f.level}: {len(report.detected)} pairs, cm"


def check_cocycles(limits: Limits) -> str:
    c2 = cyclic_group(2)
    etas = {0: DirichletCharacter.trivial(), 1: chi_minus_4()}
    ribet = ribet_cocycle_table(c2, etas, cyc_rational(12))
    _require(ribet.is_cocycle(), "Ribet's c(σ, τ) fails the cocycle identity")

    ring = trunc_iwasawa(3, 1, 3)
    one_plus_t = ring.add(ring.one, ring.variable_T())
    values = {(g, h): ring.one for g in c2.elements for h in c2.elements}
    values[(1, 1)] = one_plus_t
    b = Cocycle2(c2, ring, values)
    splitting = split_tsigma_cocycle(b, limits.search_cap)
    _require(b.is_split_by(splitting.zeta), "splitting does not reproduce b")
    return f"ζ(σ) = {ring.format(splitting.zeta[1])}"


def _determinism_jobs(workdir: Path, limits: Limits) -> list[JobConfig]:
    small = trunc_iwasawa(3, 1, 2)
    big = trunc_iwasawa(3, 2, 2)
    pink_file = workdir / "gamma_m_f3.txt"
    pink_file.write_text(
        format_group_file(congruence_generators(maximal_ideal(small)), small, "Γ(m)")
    )
    full_file = workdir / "gamma_m_z9.txt"
    full_file.write_text(format_group_file(congruence_generators(maximal_ideal(big)), big, "Γ(m)"))
    caps = {"enumeration_cap": limits.enumeration_cap, "search_cap": limits.search_cap}
    return [
        JobConfig(Command.PINK, ring="kind=trunc_iwasawa, p=3, a=1, b=2", group=pink_file, **caps),
        JobConfig(
            Command.FULLNESS,
            ring="kind=trunc_iwasawa, p=3, a=2, b=2",
            group=full_file,
            options={"j": "1,0;0,8"},
            **caps,
        ),
    ]


def check_determinism(limits: Limits) -> str:
    from hida_fullness.core.runner import PipelineRunner

    with tempfile.TemporaryDirectory() as tmp:
        jobs = _determinism_jobs(Path(tmp), limits)
        outputs = []
        for workers in (1, 4, 1):
            runner = PipelineRunner(limits, workers=workers)
            reports = asyncio.run(runner.run(jobs))
            bad = [r for r in reports if not r.ok]
            _require(not bad, f"job failed: {bad[0].error}" if bad else "")
            outputs.append([dumps(r) for r in reports])
    _require(all(o == outputs[0] for o in outputs), "reports differ between runs")
    return "3 runs, workers 1 and 4"


CHECKS: list[tuple[str, Callable[[Limits], str]]] = [
    ("Pink law L_2(Γ(a)) = a^2·sl_2", check_pink_law),
    ("Pink's theorem on random p-groups", check_pink_theorem),
    ("congruence level round trip", check_congruence_level),
    ("fullness pipeline on Γ(m)", check_fullness),
    ("lattice to ideal", check_lattice_to_ideal),
    ("Goursat and Merzljakov", check_goursat),
    ("obstruction classes", check_obstruction),
    ("Hecke operators and twists", check_hecke_twist),
    ("self-twist detection", check_twist_detection),
    ("cocycles", check_cocycles),
    ("report determinism", check_determinism),
]


def run_selftest(limits: Limits, only: list[int] | None = None) -> list[CheckResult]:
    results = []
    for number, (name, check) in enumerate(CHECKS, start=1):
        if only and number not in only:
            continue
        start = time.perf_counter()
        try:
            detail = check(limits)
            verdict = Verdict.PASS
        except TooLarge as e:
            detail, verdict = str(e), Verdict.SKIP
        except CheckFailed as e:
            detail, verdict = str(e), Verdict.FAIL
        except HidaFullnessError as e:
            detail, verdict = f"{type(e).__name__}: {e}", Verdict.FAIL
        seconds = time.perf_counter() - start
        logger.info(f"[{number}] {name}: {verdict.value} ({seconds:.1f}s)")
        results.append(CheckResult(number, name, verdict, detail, seconds))
    return results


def print_results(results: list[CheckResult], console: Console | None = None) -> None:
    console = console or Console()
    table = Table(title="hida-fullness selftest")
    table.add_column("#", justify="right")
    table.add_column("Criterion")
    table.add_column("Verdict")
    table.add_column("Time", justify="right")
    table.add_column("Detail", overflow="fold")
    styles = {Verdict.PASS: "green", Verdict.FAIL: "bold red", Verdict.SKIP: "yellow"}
    for r in results:
        verdict = f"[{styles[r.verdict]}]{r.verdict.value}[/{styles[r.verdict]}]"
        table.add_row(str(r.number), r.name, verdict, f"{r.seconds:.1f}s", r.detail)
    console.print(table)
