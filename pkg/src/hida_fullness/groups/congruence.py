"""
Congruence subgroups Γ_A(a) = ker(SL_2(A) -> SL_2(A/a)), reductions, levels
and subnormality.
"""

from __future__ import annotations

import itertools
import logging

from hida_fullness.errors import TooLarge, Unsupported
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import (
    DEFAULT_ENUMERATION_CAP,
    MatrixGroup,
    enumerate_subgroup,
    normal_closure,
)
from hida_fullness.lattices.ideals import (
    IdealHandle,
    enumerate_ideals,
    ideal_sum,
    unit_ideal,
    zero_ideal,
)
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, quotient

logger = logging.getLogger(__name__)


def _one_plus_generators(ideal: IdealHandle) -> list[Coeffs]:
    """Greedy generating set of the multiplicative group 1 + a."""
    ring = ideal.ring
    chosen: list[Coeffs] = []
    span: set[Coeffs] = {ring.one}
    for a in ideal.elements():
        u = ring.add(ring.one, a)
        if u in span:
            continue
        chosen.append(u)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for g in chosen:
                    y = ring.mul(x, g)
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return chosen


def _unit_generators(ring: RingDescriptor) -> list[Coeffs]:
    chosen: list[Coeffs] = []
    span: set[Coeffs] = {ring.one}
    for u in ring.units():
        if u in span:
            continue
        chosen.append(u)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for g in chosen:
                    y = ring.mul(x, g)
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return chosen


def congruence_generators(ideal: IdealHandle) -> list[Matrix]:
    """Generators of Γ_A(a): E12, E21 on an additive basis of a and diag(u, u^-1)."""
    ring = ideal.ring
    alg = MatrixAlgebra(ring)
    basis = ideal.generators()
    gens: list[Matrix] = []
    for g in basis:
        gens.append(alg.e12(g))
        gens.append(alg.e21(g))
    units = _unit_generators(ring) if ideal.is_unit_ideal() else _one_plus_generators(ideal)
    for u in units:
        gens.append(alg.diag(u, ring.inverse(u)))
    return list(dict.fromkeys(gens))


def _in_congruence(ideal: IdealHandle, alg: MatrixAlgebra, x: Matrix) -> bool:
    ring = ideal.ring
    if alg.det(x) != ring.one:
        return False
    return all(ideal.contains(e) for e in alg.sub(x, alg.identity))


def congruence_subgroup(ideal: IdealHandle, cap: int = DEFAULT_ENUMERATION_CAP) -> MatrixGroup:
    """
    Γ_A(a).

    Proper ideals inside the nilradical are enumerated directly through the
    decomposition x = E21(γ)·diag(u, u^-1)·E12(β) with β, γ ∈ a, u ∈ 1 + a.
    The unit ideal yields SL_2(A) with a membership predicate and no element list.
    """
    ring = ideal.ring
    alg = MatrixAlgebra(ring)
    label = f"Gamma({ideal})"
    gens = tuple(congruence_generators(ideal))

    if ideal.is_unit_ideal():
        return MatrixGroup(
            ring, gens, label="SL2", membership=lambda x: alg.det(x) == ring.one
        )
    members = list(ideal.elements())
    if not all(ring.is_nilpotent(a) for a in members):
        raise Unsupported(f"congruence subgroups need a nilpotent ideal, got {ideal}")
    if len(members) ** 3 > cap:
        raise TooLarge(f"|{label}| = {len(members) ** 3} exceeds the enumeration cap {cap}")

    elements: list[Matrix] = []
    for gamma, a, beta in itertools.product(members, members, members):
        u = ring.add(ring.one, a)
        lower = alg.e21(ring.mul(gamma, u))
        middle = alg.diag(u, ring.inverse(u))
        upper = alg.e12(ring.mul(beta, ring.inverse(u)))
        elements.append(alg.mul(alg.mul(lower, middle), upper))
    group = MatrixGroup.from_elements(ring, elements, label=label)
    group.generators = gens
    group.membership = lambda x: _in_congruence(ideal, alg, x)
    logger.debug(f"{label}: order {len(elements)}")
    return group


def sl2(ring: RingDescriptor) -> MatrixGroup:
    return congruence_subgroup(unit_ideal(ring))


def contains_congruence(group: MatrixGroup, ideal: IdealHandle) -> bool:
    """Γ_A(a) ⊆ G, tested on generators of Γ_A(a)."""
    return group.contains_all(congruence_generators(ideal))


# ──────────────────────────────────────────────
# Reduction
# ──────────────────────────────────────────────


def reduce_group(group: MatrixGroup, ideal: IdealHandle) -> MatrixGroup:
    """Image of G in SL_2(A/a) (enumerated when G is)."""
    target = quotient(group.ring, ideal.lattice)
    alg = MatrixAlgebra(target)

    def red(x: Matrix) -> Matrix:
        return alg.matrix(*x)

    gens = tuple(dict.fromkeys(red(g) for g in group.generators))
    label = f"{group.label or 'G'} mod {ideal}"
    if group.is_enumerated:
        images = list(dict.fromkeys(red(x) for x in group.elements))
        reduced = MatrixGroup.from_elements(target, images, label=label)
        reduced.generators = gens
        return reduced
    return MatrixGroup(target, gens, label=label)


# ──────────────────────────────────────────────
# Level and subnormality
# ──────────────────────────────────────────────


def congruence_level(group: MatrixGroup) -> IdealHandle:
    """
    Join of all ideals a with Γ_A(a) ⊆ G.

    When the join itself fails the containment, a warning is logged and the
    largest maximal contained ideal is returned instead.
    """
    ring = group.ring
    ideals = enumerate_ideals(ring)
    contained = [a for a in ideals if contains_congruence(group, a)]
    join = zero_ideal(ring)
    for a in contained:
        join = ideal_sum(join, a)
    if contains_congruence(group, join):
        logger.debug(f"congruence level of {group.label or 'G'}: {join}")
        return join

    maximal = [a for a in contained if not any(a != b and a.subset(b) for b in contained)]
    best = max(maximal, key=lambda a: (a.size, a.lattice.basis))
    logger.warning(
        f"contained congruence ideals are not closed under sums for {group.label or 'G'}; "
        f"returning the largest of {len(maximal)} maximal ideals"
    )
    return best


def is_subnormal(group: MatrixGroup, cap: int = DEFAULT_ENUMERATION_CAP) -> bool:
    """
    Walk S_0 = SL_2(A), S_{i+1} = normal closure of G in S_i until it stabilizes;
    G is subnormal exactly when the chain reaches G.
    """
    ring = group.ring
    current = sl2(ring)
    current = enumerate_subgroup(ring, current.generators, cap, label="SL2")
    group.enumerate(cap)
    while True:
        nxt = normal_closure(group.generators, current, cap)
        logger.debug(f"subnormal chain: {current.order} -> {nxt.order}")
        if nxt.order == group.order:
            return True
        if nxt.order == current.order:
            return False
        current = nxt
