"""
Ideals — ideal arithmetic of finite coefficient rings on top of Howell lattices.

An ideal of a finite ring A is stored as the SubLattice of its elements in
A's coordinate space (Z/N)^rank. For quotient rings the lattice always
contains the ring's relation rows, so canonical representatives test
membership directly.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

from hida_fullness.errors import Degenerate, RingMismatch, TooLarge
from hida_fullness.lattices.howell import SubLattice, kernel_lattice
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.morphism import RingMorphism, generators

logger = logging.getLogger(__name__)

IDEAL_ENUMERATION_LIMIT = 3**8


def _raw(x: RingElement | Coeffs) -> Coeffs:
    return x.coeffs if isinstance(x, RingElement) else tuple(x)


def _span(ring: RingDescriptor, rows: Iterable[Sequence[int]]) -> SubLattice:
    return SubLattice.span(list(rows) + list(ring.relations()), ring.modulus, ring.rank)


@dataclass(frozen=True)
class IdealHandle:
    """An ideal of ``ring`` held as an additive lattice."""

    ring: RingDescriptor
    lattice: SubLattice

    def contains(self, x: RingElement | Coeffs) -> bool:
        return self.lattice.contains(_raw(x))

    def subset(self, other: IdealHandle) -> bool:
        _check_same_ring(self, other)
        return self.lattice.subset(other.lattice)

    def is_zero(self) -> bool:
        return self.lattice.subset(_span(self.ring, []))

    def is_unit_ideal(self) -> bool:
        return self.contains(self.ring.one)

    @property
    def size(self) -> int:
        return self.lattice.size // _span(self.ring, []).size

    def elements(self) -> Iterator[Coeffs]:
        """Canonical representatives of the ideal's elements (no repeats)."""
        seen: set[Coeffs] = set()
        for v in self.lattice.elements():
            x = self.ring.normalize(v)
            if x not in seen:
                seen.add(x)
                yield x

    def generators(self) -> list[Coeffs]:
        """Nonzero basis rows as ring elements."""
        out = []
        for row in self.lattice.basis:
            x = self.ring.normalize(row)
            if not self.ring.is_zero(x) and x not in out:
                out.append(x)
        return out

    def is_ideal(self) -> bool:
        """Closed under multiplication by every ring generator (and by 1)."""
        gens = generators(self.ring) + [self.ring.basis_vector(i) for i in range(self.ring.rank)]
        return all(
            self.contains(self.ring.mul(g, row))
            for g in gens
            for row in self.generators()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return self.ring == other.ring and self.lattice.basis == other.lattice.basis

    def __hash__(self) -> int:
        return hash((self.ring, self.lattice.basis))

    def describe(self) -> list[str]:
        return [self.ring.format(g) for g in self.generators()] or ["0"]

    def __str__(self) -> str:
        return "(" + ", ".join(self.describe()) + ")"


def _check_same_ring(a: IdealHandle, b: IdealHandle) -> None:
    if a.ring != b.ring:
        raise RingMismatch(f"ideals live in different rings: {a.ring} vs {b.ring}")


# ──────────────────────────────────────────────
# Construction
# ──────────────────────────────────────────────


def zero_ideal(ring: RingDescriptor) -> IdealHandle:
    return IdealHandle(ring, _span(ring, []))


def unit_ideal(ring: RingDescriptor) -> IdealHandle:
    return IdealHandle(ring, SubLattice.full(ring.modulus, ring.rank))


def maximal_ideal(ring: RingDescriptor) -> IdealHandle:
    """m = (p, nilpotent basis vectors) of a local finite ring."""
    gens = [ring.from_int(ring.prime)]
    basis = [ring.basis_vector(k) for k in range(ring.rank)]
    gens += [e for e in basis if ring.in_maximal_ideal(e)]
    return ideal_closure(gens, ring)


def ideal_closure(
    gens: Sequence[RingElement | Coeffs], ring: RingDescriptor | None = None
) -> IdealHandle:
    """
    Smallest ideal containing ``gens``: Howell closure of {g·e_k}.
    """
    if ring is None:
        if not gens or not isinstance(gens[0], RingElement):
            raise ValueError("ring is required when generators are raw coefficients")
        ring = gens[0].ring
    basis = [ring.basis_vector(k) for k in range(ring.rank)]
    rows = [ring.mul(_raw(g), e) for g in gens for e in basis]
    return IdealHandle(ring, _span(ring, rows))


def principal(ring: RingDescriptor, g: RingElement | Coeffs) -> IdealHandle:
    return ideal_closure([g], ring)


def ideal_sum(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    _check_same_ring(a, b)
    return IdealHandle(a.ring, a.lattice.join(b.lattice))


def ideal_product(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    _check_same_ring(a, b)
    ring = a.ring
    products = [ring.mul(x, y) for x in a.generators() for y in b.generators()]
    return ideal_closure(products, ring) if products else zero_ideal(ring)


def ideal_power(a: IdealHandle, e: int) -> IdealHandle:
    out = unit_ideal(a.ring)
    for _ in range(e):
        out = ideal_product(out, a)
    return out


def ideal_intersection(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    _check_same_ring(a, b)
    return IdealHandle(a.ring, a.lattice.intersect(b.lattice))


# ──────────────────────────────────────────────
# Colon lattices
# ──────────────────────────────────────────────


def _colon(
    ring: RingDescriptor, target: SubLattice, multipliers: Sequence[Sequence[int]]
) -> SubLattice:
    """{x : x·m ∈ target for every m in multipliers}."""
    n, r = ring.modulus, ring.rank
    mults = [tuple(m) for m in multipliers]
    if not mults:
        return SubLattice.full(n, r)
    k = len(mults)
    rows = []
    for j in range(r):
        e = ring.basis_vector(j)
        row: list[int] = []
        for m in mults:
            row.extend(int(c) for c in ring.mul(e, m))
        rows.append(row)
    relations = []
    for block in range(k):
        for t in list(target.basis) + list(ring.relations()):
            rel = [0] * (k * r)
            rel[block * r : (block + 1) * r] = t
            relations.append(rel)
    return kernel_lattice(rows, relations, n)


def multiplier_ring(module: SubLattice, ring: RingDescriptor) -> SubLattice:
    """R = {x ∈ A : x·M ⊆ M}."""
    return _colon(ring, module, module.basis)


def conductor(order: SubLattice, ring: RingDescriptor) -> IdealHandle:
    """c = {x ∈ A : x·A ⊆ R}; an ideal of A contained in R."""
    basis = [ring.basis_vector(i) for i in range(ring.rank)]
    return IdealHandle(ring, _colon(ring, order, basis).join(_span(ring, [])))


def lattice_to_ideal(module: SubLattice, ring: RingDescriptor) -> IdealHandle:
    """
    Nonzero ideal inside a lattice M: conductor(multiplier_ring(M)) · (M·A).

    Raises:
        Degenerate: the resulting ideal is zero.
    """
    if not any(ring.is_unit(ring.normalize(row)) for row in module.basis):
        logger.warning(
            f"lattice {module.to_rows()} contains no unit; the ideal found may be smaller "
            f"than the lattice's true ideal content"
        )
    order = multiplier_ring(module, ring)
    cond = conductor(order, ring)
    extended = ideal_closure([ring.normalize(r) for r in module.basis], ring)
    result = ideal_product(cond, extended)
    logger.debug(
        f"lattice_to_ideal: |R|={order.size}, conductor={cond}, M·A={extended}, result={result}"
    )
    if result.is_zero():
        raise Degenerate(f"lattice {module.to_rows()} yields the zero ideal")
    return result


# ──────────────────────────────────────────────
# Ideal lattice of the ring
# ──────────────────────────────────────────────


def enumerate_ideals(
    ring: RingDescriptor, limit: int = IDEAL_ENUMERATION_LIMIT
) -> list[IdealHandle]:
    """
    Every ideal of a finite ring, smallest first.

    Raises:
        TooLarge: the ring has more than ``limit`` elements.
    """
    if ring.size > limit:
        raise TooLarge(f"ideal enumeration over {ring.size} elements exceeds {limit}")
    found: dict[tuple[tuple[int, ...], ...], IdealHandle] = {}
    for x in ring.elements():
        ideal = principal(ring, x)
        found.setdefault(ideal.lattice.basis, ideal)

    frontier = list(found.values())
    while frontier:
        new: list[IdealHandle] = []
        current = list(found.values())
        for a in frontier:
            for b in current:
                s = ideal_sum(a, b)
                if s.lattice.basis not in found:
                    found[s.lattice.basis] = s
                    new.append(s)
        frontier = new

    ideals = sorted(found.values(), key=lambda i: (i.size, i.lattice.basis))
    logger.debug(f"{ring} has {len(ideals)} ideals")
    return ideals


def morphism_kernel(morphism: RingMorphism) -> IdealHandle:
    ring = morphism.source
    return IdealHandle(ring, _span(ring, morphism.kernel_rows()))


# ──────────────────────────────────────────────
# Matrix lattices: M_2(A) flattened as a | b | c | d
# ──────────────────────────────────────────────


def matrix_relations(ring: RingDescriptor) -> list[tuple[int, ...]]:
    r = ring.rank
    out = []
    for block in range(4):
        for rel in ring.relations():
            row = [0] * (4 * r)
            row[block * r : (block + 1) * r] = rel
            out.append(tuple(row))
    return out


def matrix_span(ring: RingDescriptor, rows: Iterable[Sequence[int]]) -> SubLattice:
    return SubLattice.span(list(rows) + matrix_relations(ring), ring.modulus, 4 * ring.rank)


def ideal_times_sl2(ideal: IdealHandle) -> SubLattice:
    """The lattice a·sl_2(A) spanned by E12(g), E21(g), H(g) for g in a."""
    ring = ideal.ring
    z = ring.zero
    rows = []
    for g in ideal.generators():
        rows.append(z + g + z + z)
        rows.append(z + z + g + z)
        rows.append(g + z + z + ring.neg(g))
    return matrix_span(ring, rows)
