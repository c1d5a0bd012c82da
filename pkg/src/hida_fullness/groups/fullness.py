"""
Fullness Certificates — from a normalized p-subgroup of SL_2(A) to an ideal
a_0 with Γ_A(a_0) ⊆ G.

Pipeline stages, in order:

    pink_tower → ad_eigensplit → lambda_stability_check → nilpotent_ideals
    → ideal_product → lie_containment → confirm_containment

Each stage appends ``(stage, outcome)`` to the certificate trace; a failing
stage raises with ``stage`` set.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

from hida_fullness.errors import (
    BadDomain,
    BadJ,
    Degenerate,
    HidaFullnessError,
    NotStable,
    Unverified,
)
from hida_fullness.groups.congruence import congruence_subgroup, contains_congruence
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import DEFAULT_ENUMERATION_CAP, MatrixGroup
from hida_fullness.groups.pink import PinkData, lattice_matrices, pink_tower
from hida_fullness.lattices.howell import SubLattice
from hida_fullness.lattices.ideals import (
    IdealHandle,
    ideal_power,
    ideal_product,
    ideal_times_sl2,
    lattice_to_ideal,
    matrix_span,
)
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, RingKind
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.padic import beta_substitute, sqrt_one_plus_m

logger = logging.getLogger(__name__)

STAGES = (
    "pink_tower",
    "ad_eigensplit",
    "lambda_stability_check",
    "nilpotent_ideals",
    "ideal_product",
    "lie_containment",
    "confirm_containment",
)


# ──────────────────────────────────────────────
# Coordinate sublattices of M_2(A)
# ──────────────────────────────────────────────


def _block_lattice(ring: RingDescriptor, blocks: Sequence[int]) -> SubLattice:
    r = ring.rank
    rows = []
    for block in blocks:
        for i in range(r):
            row = [0] * (4 * r)
            row[block * r + i] = 1
            rows.append(row)
    return matrix_span(ring, rows)


def _diagonal_trace_zero(ring: RingDescriptor) -> SubLattice:
    alg = MatrixAlgebra(ring)
    rows = []
    for i in range(ring.rank):
        e = ring.basis_vector(i)
        rows.append(alg.flatten(alg.diag(e, ring.neg(e))))
    return matrix_span(ring, rows)


def _entries(ring: RingDescriptor, lattice: SubLattice, block: int) -> SubLattice:
    r = ring.rank
    rows = [row[block * r : (block + 1) * r] for row in lattice.basis]
    return SubLattice.span(list(rows) + list(ring.relations()), ring.modulus, r)


# ──────────────────────────────────────────────
# Ad(j) eigenspaces
# ──────────────────────────────────────────────


@dataclass
class EigenSplit:
    """
    Eigenspace decomposition of a lattice under Ad(j), j = diag(ζ, ζ').

    ``spaces`` maps "alpha", "one", "alpha_inv" (generic case) or "one",
    "minus_one" (α = -1) to lattices. ``upper``/``lower`` are always the
    strictly upper/lower nilpotent parts.
    """

    ring: RingDescriptor
    alpha: Coeffs
    spaces: dict[str, SubLattice]
    upper: SubLattice
    lower: SubLattice
    minus_one_case: bool

    @property
    def shape(self) -> str:
        return "alpha=-1" if self.minus_one_case else "generic"

    def to_dict(self) -> dict[str, object]:
        return {
            "alpha": self.ring.format(self.alpha),
            "shape": self.shape,
            "spaces": {k: v.to_rows() for k, v in self.spaces.items()},
        }


def _check_j(alg: MatrixAlgebra, j: Matrix) -> tuple[Coeffs, Coeffs, Coeffs]:
    ring = alg.ring
    if not alg.is_diagonal(j):
        raise BadJ(f"j = {alg.format(j)} is not diagonal", stage="ad_eigensplit")
    zeta, zeta_p = j[0], j[3]
    if not (ring.is_unit(zeta) and ring.is_unit(zeta_p)):
        raise BadJ(f"j = {alg.format(j)} is not invertible", stage="ad_eigensplit")
    if ring.is_nilpotent(ring.sub(zeta, zeta_p)):
        raise BadJ(
            f"diagonal entries of j = {alg.format(j)} agree modulo the maximal ideal",
            stage="ad_eigensplit",
        )
    alpha = ring.mul(zeta, ring.inverse(zeta_p))
    return zeta, zeta_p, alpha


def ad_eigensplit(lattice: SubLattice, j: Matrix, ring: RingDescriptor) -> EigenSplit:
    """
    Split an Ad(j)-stable lattice of sl_2(A) into Ad(j)-eigenspaces.

    Raises:
        BadJ: j is not diagonal with residually distinct entries, or α ≡ -1
            without α = -1.
        NotStable: Ad(j)L ⊄ L, or L is not the sum of its eigenspaces.
    """
    alg = MatrixAlgebra(ring)
    _, _, alpha = _check_j(alg, j)
    minus_one = ring.add(alpha, ring.one)
    minus_one_case = ring.is_zero(minus_one)
    if not minus_one_case and ring.is_nilpotent(minus_one):
        raise BadJ("alpha is congruent to -1 without being -1", stage="ad_eigensplit")

    for x in lattice_matrices(alg, lattice):
        if not lattice.contains(alg.flatten(alg.conj(j, x))):
            raise NotStable(f"Ad(j) moves {alg.format(x)} out of L", stage="ad_eigensplit")

    upper = lattice.intersect(_block_lattice(ring, [1]))
    lower = lattice.intersect(_block_lattice(ring, [2]))
    diagonal = lattice.intersect(_diagonal_trace_zero(ring))
    if minus_one_case:
        anti = lattice.intersect(_block_lattice(ring, [1, 2]))
        spaces = {"one": diagonal, "minus_one": anti}
    else:
        spaces = {"alpha": upper, "one": diagonal, "alpha_inv": lower}

    total = matrix_span(ring, [])
    for part in spaces.values():
        total = total.join(part)
    if total.basis != lattice.basis:
        raise NotStable("L is not the sum of its Ad(j)-eigenspaces", stage="ad_eigensplit")
    return EigenSplit(ring, alpha, spaces, upper, lower, minus_one_case)


# ──────────────────────────────────────────────
# Λ-stability, nilpotent ideals
# ──────────────────────────────────────────────


def lambda_stability_check(lattice: SubLattice, ring: RingDescriptor) -> bool:
    """
    With J = diag(1+T, 1): Ad(J)x - x = T·x must lie in L for x in the upper
    part, and Ad(J)y - y = ((1+T)^-1 - 1)·y for y in the lower part.
    """
    if ring.kind is not RingKind.TRUNC_IWASAWA:
        raise BadDomain(f"the Λ-stability check needs a truncated Iwasawa algebra, not {ring}")
    alg = MatrixAlgebra(ring)
    t = ring.generator()
    big_j = alg.diag(ring.add(ring.one, t), ring.one)
    upper = lattice.intersect(_block_lattice(ring, [1]))
    lower = lattice.intersect(_block_lattice(ring, [2]))

    for x in lattice_matrices(alg, upper):
        shifted = alg.sub(alg.conj(big_j, x), x)
        if not lattice.contains(alg.flatten(shifted)):
            return False

    lower_factor = beta_substitute(RingElement(ring, t)).coeffs
    for y in lattice_matrices(alg, lower):
        shifted = alg.sub(alg.conj(big_j, y), y)
        if shifted != alg.scale(lower_factor, y):
            return False
        if not lattice.contains(alg.flatten(shifted)):
            return False
    return True


def nilpotent_ideals(split: EigenSplit) -> tuple[IdealHandle, IdealHandle]:
    """
    Entry lattices v, v^t of the nilpotent parts, each turned into an ideal.

    Raises:
        Degenerate: either nilpotent part is zero.
    """
    ring = split.ring
    v = _entries(ring, split.upper, 1)
    vt = _entries(ring, split.lower, 2)
    relations_only = SubLattice.span(list(ring.relations()), ring.modulus, ring.rank)
    if v.subset(relations_only) or vt.subset(relations_only):
        raise Degenerate(
            "a nilpotent part of L is zero; deepen the truncation or check indecomposability",
            stage="nilpotent_ideals",
        )
    try:
        b = lattice_to_ideal(v, ring)
        bt = lattice_to_ideal(vt, ring)
    except Degenerate as exc:
        exc.stage = "nilpotent_ideals"
        raise
    return b, bt


# ──────────────────────────────────────────────
# √det twist
# ──────────────────────────────────────────────


def sl2_twist(
    images: Sequence[tuple[str, Matrix]], ring: RingDescriptor
) -> list[tuple[str, Matrix]]:
    """ρ ⊗ √det^-1: divide each matrix by the square root of its determinant."""
    alg = MatrixAlgebra(ring)
    out = []
    for label, x in images:
        root = sqrt_one_plus_m(RingElement(ring, alg.det(x)))
        out.append((label, alg.scale(root.inverse().coeffs, x)))
    return out


# ──────────────────────────────────────────────
# Certificate
# ──────────────────────────────────────────────


@dataclass
class FullnessCertificate:
    ideal: IdealHandle
    b_ideal: IdealHandle
    bt_ideal: IdealHandle
    verified: bool
    layer: int
    split_shape: str
    pipeline_trace: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict[str, object]:
        return {
            "ideal_basis": self.ideal.lattice.to_rows(),
            "ideal": self.ideal.describe(),
            "b_basis": self.b_ideal.lattice.to_rows(),
            "bt_basis": self.bt_ideal.lattice.to_rows(),
            "verified": self.verified,
            "layer": self.layer,
            "eigensplit": self.split_shape,
            "pipeline_trace": [list(step) for step in self.pipeline_trace],
        }


class _Trace(list[tuple[str, str]]):
    def run(self, stage: str) -> _Stage:
        return _Stage(self, stage)


class _Stage:
    def __init__(self, trace: _Trace, stage: str):
        self.trace = trace
        self.stage = stage

    def __enter__(self) -> _Stage:
        return self

    def __exit__(self, exc_type: object, exc: BaseException | None, tb: object) -> bool:
        if exc is None:
            return False
        if isinstance(exc, HidaFullnessError):
            exc.stage = exc.stage or self.stage
            self.trace.append((self.stage, f"error: {exc}"))
            exc.trace = list(self.trace)  # type: ignore[attr-defined]
        return False


def fullness_certificate(
    group: MatrixGroup,
    j: Matrix,
    layer: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tower: PinkData | None = None,
) -> FullnessCertificate:
    """
    Run the pipeline on G normalized by j, using L_layer for the eigensplit.

    Raises:
        NotPGroup, BadJ, NotStable, Degenerate: from the stages.
        Unverified: the Lie containment or the direct membership check fails.
    """
    ring = group.ring
    trace = _Trace()

    with trace.run("pink_tower"):
        data = tower or pink_tower(group, max(layer, 2), cap, with_h=False)
    trace.append(("pink_tower", f"|G|={group.order}, |L_{layer}|={data.layer(layer).size}"))

    with trace.run("ad_eigensplit"):
        split = ad_eigensplit(data.layer(layer), j, ring)
    trace.append(("ad_eigensplit", split.shape))

    with trace.run("lambda_stability_check"):
        if ring.kind is RingKind.TRUNC_IWASAWA:
            if not lambda_stability_check(data.layer(layer), ring):
                raise NotStable("nilpotent parts are not T-stable")
            trace.append(("lambda_stability_check", "ok"))
        else:
            trace.append(("lambda_stability_check", "skipped"))

    with trace.run("nilpotent_ideals"):
        b, bt = nilpotent_ideals(split)
    trace.append(("nilpotent_ideals", f"b={b}, bt={bt}"))

    with trace.run("ideal_product"):
        a0 = ideal_product(b, bt)
        if a0.is_zero():
            raise Degenerate(
                f"a_0 = b·b^t is zero for b={b}, bt={bt}; deepen the truncation",
                stage="nilpotent_ideals",
            )
    trace.append(("ideal_product", f"a0={a0}"))

    with trace.run("lie_containment"):
        square = ideal_power(a0, 2)
        if not ideal_times_sl2(square).subset(data.layer(2)):
            raise Unverified("a_0^2·sl_2(A) is not contained in L_2")
    trace.append(("lie_containment", "vacuous: a_0^2 = 0" if square.is_zero() else "ok"))

    with trace.run("confirm_containment"):
        verified = contains_congruence(group, a0)
        members = a0.size**3
        if verified and members <= cap:
            verified = group.contains_all(congruence_subgroup(a0, cap).elements)
            trace.append(("confirm_containment", f"exhaustive over {members} elements"))
        elif verified:
            trace.append(("confirm_containment", "generators"))
        if not verified:
            raise Unverified(f"Γ({a0}) is not contained in G")

    certificate = FullnessCertificate(a0, b, bt, verified, layer, split.shape, list(trace))
    logger.info(f"fullness certificate for {group.label or 'G'}: a0={a0}, verified={verified}")
    return certificate
