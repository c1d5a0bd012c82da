"""
Pipelines — one function per CLI command, from a JobConfig to a JSON payload.

Every pipeline is pure: it reads its input files, runs library code and
returns a dictionary. ``run_job`` wraps a pipeline into a JobReport and sorts
failures into input errors (status ``error``) and verification outcomes
(status ``failed``).
"""

import logging
from collections.abc import Callable
from pathlib import Path

from sympy import prime

from hida_fullness.core.config import Limits
from hida_fullness.errors import (
    BadInput,
    Degenerate,
    HidaFullnessError,
    NotRegular,
    NotTriangular,
    TooLarge,
    Unverified,
)
from hida_fullness.forms.eta import eta_product_expand
from hida_fullness.forms.qexpansion import (
    QExpansion,
    hecke_eigenvalue,
    hecke_T,
    ordinarity,
    u_operator,
    v_operator,
)
from hida_fullness.forms.twists import build_fM, detect_self_twists, m_level, twist_map
from hida_fullness.groups.congruence import congruence_level
from hida_fullness.groups.finite import FiniteGroup
from hida_fullness.groups.fullness import fullness_certificate
from hida_fullness.groups.goursat import (
    ProductSubgroup,
    goursat,
    merzljakov_search,
    pairwise_implies_product,
)
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import MatrixGroup, enumerate_subgroup
from hida_fullness.groups.obstruction import (
    brute_force_extensions,
    extend_rep,
    obstruction_class,
)
from hida_fullness.groups.pink import pink_tower, verify_pink_theorem
from hida_fullness.groups.teichmuller import TeichmullerLimit, teichmuller_matrix_limit
from hida_fullness.lattices.ideals import enumerate_ideals
from hida_fullness.models.job import Command, JobConfig, JobReport, JobStatus
from hida_fullness.parsers.group_file import parse_group_file, parse_matrix, parse_product_file
from hida_fullness.parsers.qexp_csv import parse_qexp_csv
from hida_fullness.parsers.ring_spec import parse_ring_spec
from hida_fullness.parsers.tables import parse_cayley_csv, parse_character, parse_rep_file
from hida_fullness.rings.descriptor import RingDescriptor, rational
from hida_fullness.rings.morphism import ring_automorphisms

logger = logging.getLogger(__name__)

VERIFICATION_ERRORS = (Degenerate, Unverified, NotRegular, NotTriangular)

Pipeline = Callable[[JobConfig, Limits], dict]


# ──────────────────────────────────────────────
# Input helpers
# ──────────────────────────────────────────────


def _ring(config: JobConfig) -> RingDescriptor:
    return parse_ring_spec(config.ring_text())


def _input(config: JobConfig, key: str) -> Path:
    path = config.inputs.get(key)
    if path is None:
        raise BadInput(f"{config.command.value} needs --{key}")
    return path


def _group(config: JobConfig, ring: RingDescriptor, limits: Limits) -> MatrixGroup:
    if config.group is None:
        raise BadInput(f"{config.command.value} needs --group")
    gens = parse_group_file(config.group.read_text(), ring)
    return enumerate_subgroup(ring, gens, limits.enumeration_cap, label=config.group.stem)


def parse_eta_factors(text: str) -> list[tuple[int, int]]:
    """``"4^2,8^2"`` -> [(4, 2), (8, 2)]."""
    factors = []
    for part in text.split(","):
        d, _, e = part.strip().partition("^")
        try:
            factors.append((int(d), int(e or 1)))
        except ValueError:
            raise BadInput(f"bad eta factor {part!r}; expected d^e") from None
    return factors


def _qexp(config: JobConfig) -> QExpansion:
    eta = config.options.get("eta")
    if eta:
        precision = int(config.options.get("precision") or 200)
        return eta_product_expand(parse_eta_factors(str(eta)), precision)
    if config.qexp is None:
        raise BadInput(f"{config.command.value} needs --qexp or --eta")
    ring = _ring(config) if config.ring else rational()
    return parse_qexp_csv(config.qexp.read_text(), ring, label=config.qexp.stem)


# ──────────────────────────────────────────────
# Pipelines
# ──────────────────────────────────────────────


def run_ring_info(config: JobConfig, limits: Limits) -> dict:
    ring = _ring(config)
    payload: dict = {
        "ring": str(ring),
        "kind": ring.kind.value,
        "finite": ring.is_finite,
        "rank": ring.rank,
    }
    if not ring.is_finite:
        return payload
    payload["size"] = ring.size
    payload["modulus"] = ring.modulus
    try:
        ideals = enumerate_ideals(ring, limits.ideal_ring_bound)
        payload["ideals"] = [{"size": a.size, "generators": a.describe()} for a in ideals]
    except TooLarge as e:
        payload["ideals"] = None
        payload["ideals_skipped"] = str(e)
    try:
        autos = ring_automorphisms(ring, limits.automorphism_limit, limits.search_cap)
        payload["automorphisms"] = [sigma.label for sigma in autos]
    except HidaFullnessError as e:
        payload["automorphisms"] = None
        payload["automorphisms_skipped"] = str(e)
    return payload


def run_pink(config: JobConfig, limits: Limits) -> dict:
    ring = _ring(config)
    group = _group(config, ring, limits)
    depth = int(config.options.get("depth") or 3)
    tower = pink_tower(group, depth, limits.enumeration_cap)
    verdict = verify_pink_theorem(group, depth, limits.enumeration_cap, tower)
    payload: dict = {
        "group": group.to_dict(),
        "tower": tower.to_dict(),
        "pink_theorem": verdict.to_dict(),
    }
    try:
        payload["congruence_level"] = congruence_level(group).describe()
    except TooLarge as e:
        payload["congruence_level"] = None
        logger.info(f"congruence level skipped: {e}")
    if not verdict.passed:
        raise Unverified(
            "Pink's theorem check failed", stage="verify_pink_theorem", certificate=payload
        )
    return payload


def _find_j(candidates: list[Matrix], ring: RingDescriptor) -> TeichmullerLimit:
    for x in candidates:
        try:
            found = teichmuller_matrix_limit(x, ring)
        except (NotTriangular, NotRegular):
            continue
        zeta, zeta_p = found.j[0], found.j[3]
        if ring.is_unit(ring.sub(zeta, zeta_p)):
            return found
    raise NotRegular(
        f"no regular upper-triangular element among {len(candidates)} candidates; pass --j",
        stage="teichmuller_matrix_limit",
    )


def run_fullness(config: JobConfig, limits: Limits) -> dict:
    ring = _ring(config)
    group = _group(config, ring, limits)
    alg = MatrixAlgebra(ring)
    payload: dict = {"group": group.to_dict()}
    j_text = config.options.get("j")
    if j_text:
        j = parse_matrix(str(j_text), ring)
    else:
        element = config.options.get("element")
        candidates = [parse_matrix(str(element), ring)] if element else list(group.generators)
        limit = _find_j(candidates, ring)
        payload["teichmuller"] = limit.to_dict(ring)
        j = limit.j
    payload["j"] = alg.to_json(j)
    layer = int(config.options.get("layer") or 1)
    try:
        certificate = fullness_certificate(group, j, layer, limits.enumeration_cap)
    except HidaFullnessError as e:
        payload["pipeline_trace"] = [list(step) for step in getattr(e, "trace", [])]
        e.certificate = payload  # type: ignore[attr-defined]
        raise
    payload["certificate"] = certificate.to_dict()
    return payload


def _factor_group(
    gens: list[tuple[Matrix, ...]], index: int, ring: RingDescriptor, cap: int
) -> FiniteGroup:
    alg = MatrixAlgebra(ring)
    return FiniteGroup.from_generators(
        [g[index] for g in gens], alg.mul, alg.identity, cap, name=f"S_{index + 1}"
    )


def run_goursat(config: JobConfig, limits: Limits) -> dict:
    ring = _ring(config)
    if config.group is None:
        raise BadInput("goursat needs --group with '|'-separated product generators")
    gens = parse_product_file(config.group.read_text(), ring)
    if not gens:
        raise BadInput("product group file has no generators")
    width = len(gens[0])
    factors = tuple(_factor_group(gens, i, ring, limits.enumeration_cap) for i in range(width))
    encoded = tuple(
        tuple(f.index_of(x) for f, x in zip(factors, g, strict=True)) for g in gens
    )
    subgroup = ProductSubgroup(factors, encoded)
    payload: dict = {"factor_orders": [f.order for f in factors]}

    if width == 2:
        data = goursat(subgroup, limits.enumeration_cap)
        payload["goursat"] = data.to_dict()
        if data.iso is not None and config.options.get("merzljakov"):
            first, second = factors
            iso = {first.labels[x]: second.labels[y] for x, y in data.iso.items()}
            form = merzljakov_search(iso, ring, limits.automorphism_limit, limits.search_cap)
            payload["merzljakov"] = form.to_dict(ring)
    else:
        report = pairwise_implies_product(subgroup, cap=limits.enumeration_cap)
        payload["product"] = report.to_dict()
    return payload


def run_obstruction(config: JobConfig, limits: Limits) -> dict:
    ring = _ring(config)
    table = _input(config, "table")
    group = parse_cayley_csv(table.read_text(), name=table.stem)
    r = parse_rep_file(_input(config, "rep").read_text(), group, ring)
    result = obstruction_class(r, group, limits.search_cap)
    payload: dict = {"group_order": group.order, "obstruction": result.to_dict()}
    if result.vanishes:
        extensions = extend_rep(r, group, result)
        payload["extensions"] = [e.to_dict() for e in extensions]
    if config.options.get("cross_check"):
        payload["brute_force_extensions"] = len(
            brute_force_extensions(r, group, limits.search_cap)
        )
    return payload


def run_qexp(config: JobConfig, limits: Limits) -> dict:
    f = _qexp(config)
    op = str(config.options.get("op") or "info")
    n = int(config.options.get("n") or 2)
    payload: dict = {"input": f.to_dict(), "op": op}
    match op:
        case "info":
            payload["lambda_adic"] = f.is_lambda_adic
            payload["nebentypus"] = f.nebentypus.label()
        case "hecke":
            payload["output"] = hecke_T(f, n).to_dict()
        case "u":
            payload["output"] = u_operator(f, n).to_dict()
        case "v":
            payload["output"] = v_operator(f, n).to_dict()
        case "eigenvalue":
            payload["eigenvalue"] = f.ring.format(hecke_eigenvalue(f, n))
        case "ordinarity":
            payload["ordinary"] = ordinarity(f, n)
        case "twist":
            eta = parse_character(_input(config, "character").read_text())
            level = int(config.options.get("level_m") or 0) or m_level(f.nebentypus, eta, f.level)
            out = twist_map(f, eta, level)
            payload["output"] = out.to_dict()
        case "fM":
            level_m = int(config.options.get("level_m") or 0)
            if not level_m:
                raise BadInput("op fM needs --level-m")
            payload["output"] = build_fM(f, f.level, level_m).to_dict()
        case _:
            raise BadInput(f"unknown q-expansion operation {op!r}")
    return payload


def run_twist_detect(config: JobConfig, limits: Limits) -> dict:
    f = _qexp(config)
    bound = int(config.options.get("moduli_bound") or 8)
    count = int(config.options.get("primes") or 25)
    primes = [prime(i) for i in range(1, count + 1)]
    report = detect_self_twists(f, bound, primes, search_cap=limits.search_cap)
    payload = report.to_dict()
    payload["form"] = {"label": f.label, "level": f.level, "precision": f.precision}
    return payload


PIPELINES: dict[Command, Pipeline] = {
    Command.RING_INFO: run_ring_info,
    Command.PINK: run_pink,
    Command.FULLNESS: run_fullness,
    Command.GOURSAT: run_goursat,
    Command.OBSTRUCTION: run_obstruction,
    Command.QEXP: run_qexp,
    Command.TWIST_DETECT: run_twist_detect,
}


def run_job(config: JobConfig, limits: Limits) -> JobReport:
    """Run one job; library errors become a report, never an exception."""
    pipeline = PIPELINES.get(config.command)
    if pipeline is None:
        raise BadInput(f"{config.command.value} is not a pipeline command")
    try:
        payload = pipeline(config, limits)
    except VERIFICATION_ERRORS as e:
        logger.info(f"{config.command.value}: verification failed at {e.stage}: {e}")
        partial = getattr(e, "certificate", None)
        return JobReport(
            command=config.command.value,
            status=JobStatus.FAILED.value,
            payload=partial if isinstance(partial, dict) else {},
            error=str(e),
            stage=e.stage,
        )
    except HidaFullnessError as e:
        logger.debug(f"{config.command.value}: {type(e).__name__}: {e}")
        return JobReport(
            command=config.command.value,
            status=JobStatus.ERROR.value,
            error=str(e),
            stage=e.stage,
        )
    return JobReport(command=config.command.value, payload=payload)
