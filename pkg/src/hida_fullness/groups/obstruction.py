"""
Obstruction Theory — extending a representation r of a normal subgroup H ⊴ G
to G over a finite field K.

For each coset representative s of Δ = G/H an intertwiner c(s) with
c(s) r(h) c(s)^-1 = r(s h s^-1) is solved for; c is extended by
c(h s) = r(h) c(s). The scalars b(g, g') = c(g) c(g') c(gg')^-1 form a
2-cocycle on Δ with values in K^×, and r extends exactly when b = δζ for some
ζ: Δ -> K^×, in which case g -> ζ(g)^-1 c(g) is an extension.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from hida_fullness.errors import BadInput, HypothesisFailed, TooLarge
from hida_fullness.groups.cocycles import Cocycle2
from hida_fullness.groups.finite import FiniteGroup
from hida_fullness.groups.linear import MatN, SquareMatrices
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor
from hida_fullness.rings.morphism import DEFAULT_SEARCH_CAP

logger = logging.getLogger(__name__)


@dataclass
class FiniteRep:
    """A matrix representation of (a subgroup of) a table group."""

    group: FiniteGroup
    ring: RingDescriptor
    dim: int
    images: dict[int, MatN]

    @property
    def algebra(self) -> SquareMatrices:
        return SquareMatrices(self.ring, self.dim)

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.images)

    def is_homomorphism(self) -> bool:
        alg = self.algebra
        for a in self.images:
            for b in self.images:
                ab = self.group.mul(a, b)
                if self.images.get(ab) != alg.mul(self.images[a], self.images[b]):
                    return False
        return True

    def restrict(self, subset: Iterable[int]) -> FiniteRep:
        return FiniteRep(self.group, self.ring, self.dim, {h: self.images[h] for h in subset})

    def twist(self, character: dict[int, Coeffs], projection: tuple[int, ...]) -> FiniteRep:
        """g -> ψ(π(g)) ρ(g) for a character ψ of a quotient."""
        alg = self.algebra
        return FiniteRep(
            self.group,
            self.ring,
            self.dim,
            {g: alg.scale(character[projection[g]], x) for g, x in self.images.items()},
        )

    def to_dict(self) -> dict[str, object]:
        alg = self.algebra
        return {str(g): alg.to_json(x) for g, x in sorted(self.images.items())}


@dataclass
class ObstructionResult:
    cocycle: Cocycle2
    quotient: FiniteGroup
    projection: tuple[int, ...]
    representatives: list[int]
    c: dict[int, MatN]
    witness: dict[int, Coeffs] | None
    searched: int
    notes: list[str] = field(default_factory=list)

    @property
    def vanishes(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict[str, object]:
        ring = self.cocycle.ring
        return {
            "quotient_order": self.quotient.order,
            "cocycle": self.cocycle.to_dict(),
            "vanishes": self.vanishes,
            "witness": None
            if self.witness is None
            else {str(d): ring.format(v) for d, v in sorted(self.witness.items())},
            "functions_searched": self.searched,
        }


def _check_inputs(r: FiniteRep, group: FiniteGroup) -> frozenset[int]:
    h = r.domain
    if not group.is_normal(h):
        raise BadInput("the representation must be defined on a normal subgroup")
    if not r.is_homomorphism():
        raise BadInput("r is not a homomorphism on its subgroup")
    return h


def obstruction_class(
    r: FiniteRep, group: FiniteGroup, search_cap: int = DEFAULT_SEARCH_CAP
) -> ObstructionResult:
    """
    Build the obstruction cocycle of r and search for a splitting.

    Raises:
        BadInput: H is not normal in G or r is not a homomorphism.
        HypothesisFailed: r is not isomorphic to some conjugate r^g, or b is
            not scalar.
        TooLarge: more than ``search_cap`` candidate splittings.
    """
    ring, alg = r.ring, r.algebra
    h = _check_inputs(r, group)
    h_gens = group.generators(h)
    quotient, projection = group.quotient(h)
    reps = list(quotient.labels)

    c: dict[int, MatN] = {0: alg.identity}
    for s in reps[1:]:
        source = [r.images[x] for x in h_gens]
        target = [r.images[group.conj(s, x)] for x in h_gens]
        if any(alg.trace(r.images[group.conj(s, x)]) != alg.trace(r.images[x]) for x in h):
            raise HypothesisFailed(f"r and its conjugate by element {s} have different traces")
        intertwiner = alg.first_invertible(alg.intertwiners(source, target))
        if intertwiner is None:
            raise HypothesisFailed(f"no invertible intertwiner between r and r^{s}")
        c[s] = intertwiner

    rep_of = {g: reps[projection[g]] for g in group.elements}
    for g in group.elements:
        s = rep_of[g]
        c[g] = alg.mul(r.images[group.mul(g, group.inv(s))], c[s])

    values: dict[tuple[int, int], Coeffs] = {}
    for d1, d2 in itertools.product(quotient.elements, repeat=2):
        s1, s2 = reps[d1], reps[d2]
        b = alg.mul(alg.mul(c[s1], c[s2]), alg.inv(c[group.mul(s1, s2)]))
        if not alg.is_scalar(b):
            raise HypothesisFailed(
                "c(g)c(g')c(gg')^-1 is not scalar; r is not absolutely irreducible"
            )
        values[(d1, d2)] = b[0][0]
    cocycle = Cocycle2(quotient, ring, values)

    units = list(ring.units())
    total = len(units) ** quotient.order
    if total > search_cap:
        raise TooLarge(f"splitting search over {total} functions exceeds {search_cap}")
    witness = None
    searched = 0
    for candidate in itertools.product(units, repeat=quotient.order):
        searched += 1
        zeta = dict(enumerate(candidate))
        if cocycle.is_split_by(zeta):
            witness = zeta
            break
    logger.info(
        f"obstruction over |Δ|={quotient.order}: "
        f"{'vanishes' if witness else 'does not vanish'} after {searched} candidates"
    )
    return ObstructionResult(cocycle, quotient, projection, reps, c, witness, searched)


def extend_rep(r: FiniteRep, group: FiniteGroup, result: ObstructionResult) -> list[FiniteRep]:
    """
    Every extension ρ̃ ⊗ ψ, ψ a character of Δ, where ρ̃(g) = ζ(g)^-1 c(g).

    Raises:
        HypothesisFailed: the obstruction does not vanish.
    """
    if result.witness is None:
        raise HypothesisFailed("the obstruction class does not vanish; r does not extend")
    ring, alg = r.ring, r.algebra
    base = FiniteRep(
        group,
        ring,
        r.dim,
        {
            g: alg.scale(ring.inverse(result.witness[result.projection[g]]), result.c[g])
            for g in group.elements
        },
    )
    out: list[FiniteRep] = []
    for psi in result.quotient.characters(ring):
        twisted = base.twist(psi, result.projection)
        if not twisted.is_homomorphism():
            raise HypothesisFailed("constructed extension is not a homomorphism")
        if twisted.restrict(r.domain).images != r.images:
            raise HypothesisFailed("constructed extension does not restrict to r")
        if all(twisted.images != other.images for other in out):
            out.append(twisted)
    logger.debug(f"{len(out)} extensions of r to {group.name or 'G'}")
    return out


def brute_force_extensions(
    r: FiniteRep, group: FiniteGroup, search_cap: int = DEFAULT_SEARCH_CAP
) -> list[FiniteRep]:
    """
    Every homomorphism G -> GL_n(K) restricting to r, by trying all images of
    generators of G modulo H.

    Raises:
        TooLarge: more than ``search_cap`` generator assignments.
    """
    alg = r.algebra
    h = _check_inputs(r, group)
    h_gens = group.generators(h)
    extra: list[int] = []
    span = group.generate(h_gens)
    for g in group.elements:
        if g not in span:
            extra.append(g)
            span = group.generate(h_gens + extra)
    units = list(alg.units())
    total = len(units) ** len(extra)
    if total > search_cap:
        raise TooLarge(f"extension search over {total} assignments exceeds {search_cap}")

    found = []
    for choice in itertools.product(units, repeat=len(extra)):
        gen_images = {x: r.images[x] for x in h_gens}
        gen_images.update(zip(extra, choice, strict=True))
        images = group.extend_homomorphism(gen_images, alg.mul, alg.identity)
        if images is None:
            continue
        if all(images[x] == r.images[x] for x in h):
            found.append(FiniteRep(group, r.ring, r.dim, images))
    logger.debug(f"brute force: {len(found)} extensions among {total} assignments")
    return found
