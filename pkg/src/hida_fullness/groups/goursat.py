"""
Goursat — subgroups of products, pairwise-to-full surjectivity and the
Merzljakov form of isomorphisms between subgroups of SL_2.

Subgroups of S_1 × ... × S_t are held over Cayley-table factors; an element is
a single integer in mixed radix (factor 0 most significant) so products of
three copies of SL_2(F_5) fit in memory.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import prod

from hida_fullness.errors import BadInput, NotFound, RingMismatch, TooLarge
from hida_fullness.groups.closure import closure
from hida_fullness.groups.finite import FiniteGroup
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import DEFAULT_ENUMERATION_CAP
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor
from hida_fullness.rings.morphism import (
    DEFAULT_AUTOMORPHISM_LIMIT,
    DEFAULT_SEARCH_CAP,
    RingMorphism,
    ring_automorphisms,
)

logger = logging.getLogger(__name__)


# ──────────────────────────────────────────────
# Product subgroups
# ──────────────────────────────────────────────


@dataclass
class ProductSubgroup:
    factors: tuple[FiniteGroup, ...]
    generators: tuple[tuple[int, ...], ...]
    _elements: list[int] | None = field(default=None, repr=False)

    def encode(self, parts: Sequence[int]) -> int:
        code = 0
        for factor, part in zip(self.factors, parts, strict=True):
            code = code * factor.order + part
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        parts = []
        for factor in reversed(self.factors):
            code, part = divmod(code, factor.order)
            parts.append(part)
        return tuple(reversed(parts))

    def _mul(self, x: int, y: int) -> int:
        a, b = self.decode(x), self.decode(y)
        return self.encode([f.table[i][j] for f, i, j in zip(self.factors, a, b, strict=True)])

    def enumerate(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[int]:
        if self._elements is None:
            gens = [self.encode(g) for g in self.generators]
            self._elements = closure(gens, self._mul, 0, cap)
            logger.debug(f"product subgroup enumerated: order {len(self._elements)}")
        return self._elements

    @property
    def order(self) -> int:
        return len(self.enumerate())

    def members(self) -> list[tuple[int, ...]]:
        return [self.decode(x) for x in self.enumerate()]

    def projection(self, indices: Sequence[int]) -> set[tuple[int, ...]]:
        return {tuple(parts[i] for i in indices) for parts in self.members()}


def graph_subgroup(
    first: FiniteGroup, second: FiniteGroup, mapping: dict[int, int]
) -> ProductSubgroup:
    """{(x, α(x))} for a homomorphism α given on (at least) generators of ``first``."""
    gens = tuple((x, mapping[x]) for x in first.generators())
    return ProductSubgroup((first, second), gens)


@dataclass
class GoursatData:
    """
    Goursat decomposition of G ⊆ S_1 × S_2.

    ``coset_map`` sends each coset of N_1 in G_1 (by smallest member) to the
    matching coset of N_2 in G_2; ``iso`` is the element-level map when both
    kernels are trivial.
    """

    first_image: frozenset[int]
    second_image: frozenset[int]
    n1: frozenset[int]
    n2: frozenset[int]
    coset_map: dict[int, int]
    iso: dict[int, int] | None

    def graph(self, first: FiniteGroup, second: FiniteGroup) -> set[tuple[int, int]]:
        """All (x, y) with α(x N_1) = y N_2; equals the original subgroup."""
        out = set()
        cosets1 = _coset_index(first, self.first_image, self.n1)
        cosets2 = _coset_index(second, self.second_image, self.n2)
        for x in self.first_image:
            target = self.coset_map[cosets1[x]]
            for y in self.second_image:
                if cosets2[y] == target:
                    out.add((x, y))
        return out

    def to_dict(self) -> dict[str, object]:
        return {
            "G1_order": len(self.first_image),
            "G2_order": len(self.second_image),
            "N1_order": len(self.n1),
            "N2_order": len(self.n2),
            "quotient_order": len(self.coset_map),
            "isomorphism": None if self.iso is None else sorted(self.iso.items()),
        }


def _coset_index(
    group: FiniteGroup, image: frozenset[int], normal: frozenset[int]
) -> dict[int, int]:
    """Element of ``image`` -> smallest member of its coset modulo ``normal``."""
    out: dict[int, int] = {}
    for x in sorted(image):
        if x in out:
            continue
        coset = [group.mul(x, n) for n in normal]
        rep = min(coset)
        for y in coset:
            out[y] = rep
    return out


def goursat(subgroup: ProductSubgroup, cap: int = DEFAULT_ENUMERATION_CAP) -> GoursatData:
    """
    N_1 = {x : (x, 1) ∈ G}, N_2 = {y : (1, y) ∈ G} and the induced isomorphism
    G_1/N_1 ≅ G_2/N_2.
    """
    first, second = subgroup.factors
    pairs = [subgroup.decode(x) for x in subgroup.enumerate(cap)]
    g1 = frozenset(x for x, _ in pairs)
    g2 = frozenset(y for _, y in pairs)
    n1 = frozenset(x for x, y in pairs if y == 0)
    n2 = frozenset(y for x, y in pairs if x == 0)
    c1 = _coset_index(first, g1, n1)
    c2 = _coset_index(second, g2, n2)
    coset_map = {c1[x]: c2[y] for x, y in pairs}
    iso = None
    if len(n1) == 1 and len(n2) == 1:
        iso = {x: y for x, y in pairs}
    logger.debug(f"goursat: |G|={len(pairs)}, |N1|={len(n1)}, |N2|={len(n2)}")
    return GoursatData(g1, g2, n1, n2, coset_map, iso)


# ──────────────────────────────────────────────
# Pairwise surjectivity
# ──────────────────────────────────────────────


@dataclass
class ProductReport:
    hypothesis_holds: bool
    pairwise_surjective: bool
    witness_pair: tuple[int, int] | None
    is_full_product: bool | None
    surrogate: str
    orders: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict[str, object]:
        return {
            "hypothesis_holds": self.hypothesis_holds,
            "pairwise_surjective": self.pairwise_surjective,
            "witness_pair": list(self.witness_pair) if self.witness_pair else None,
            "is_full_product": self.is_full_product,
            "surrogate": self.surrogate,
            "orders": self.orders,
        }


def _commutator_hypothesis(factor: FiniteGroup, index_bound: int) -> bool:
    """[U, U] has index <= ``index_bound`` in U for every U of index <= ``index_bound``."""
    return all(
        len(u) <= index_bound * len(factor.derived_subgroup(u))
        for u in factor.subgroups(index_bound)
    )


def pairwise_implies_product(
    subgroup: ProductSubgroup,
    index_bound: int = 1,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> ProductReport:
    """
    Openness is replaced by surjectivity up to index ``index_bound``.

    Every subgroup U of index <= ``index_bound`` in each factor must have
    [U, U] of index <= ``index_bound`` in U; with the default bound this is
    perfectness of the factors. If the hypothesis holds and G maps onto every
    S_i × S_j, G is checked to be the whole product by counting.

    Raises:
        BadInput: fewer than three factors.
        TooLarge: the full product has more than ``cap`` elements, or a
            factor has too many subgroups to list.
    """
    factors = subgroup.factors
    if len(factors) < 3:
        raise BadInput(f"the pairwise criterion needs at least three factors, got {len(factors)}")
    full = prod(f.order for f in factors)
    if full > cap:
        raise TooLarge(f"product of order {full} exceeds the enumeration cap {cap}")
    surrogate = "surjectivity" if index_bound == 1 else f"index<={index_bound}"

    hypothesis = all(_commutator_hypothesis(f, index_bound) for f in factors)
    orders = {"product": full}
    if not hypothesis:
        logger.info("pairwise check: a factor fails the commutator hypothesis")
        return ProductReport(False, False, None, None, surrogate, orders)

    members = subgroup.members()
    orders["G"] = len(members)
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            image = {(m[i], m[j]) for m in members}
            target = factors[i].order * factors[j].order
            if len(image) * index_bound < target:
                logger.info(f"pairwise check: projection to factors ({i}, {j}) is not onto")
                return ProductReport(True, False, (i, j), None, surrogate, orders)
    return ProductReport(True, True, None, len(members) == full, surrogate, orders)


# ──────────────────────────────────────────────
# Merzljakov form: α(x) = η(x)·y^-1 σ(x) y
# ──────────────────────────────────────────────


@dataclass
class MerzljakovForm:
    eta: dict[Matrix, Coeffs]
    y: Matrix
    sigma: RingMorphism

    def to_dict(self, ring: RingDescriptor) -> dict[str, object]:
        alg = MatrixAlgebra(ring)
        values = sorted({ring.format(v) for v in self.eta.values()})
        return {"sigma": self.sigma.label, "y": alg.to_json(self.y), "eta_values": values}


def _apply_entrywise(sigma: RingMorphism, x: Matrix) -> Matrix:
    return (sigma(x[0]), sigma(x[1]), sigma(x[2]), sigma(x[3]))


def merzljakov_verify(
    iso: dict[Matrix, Matrix],
    eta: dict[Matrix, Coeffs],
    y: Matrix,
    sigma: RingMorphism,
) -> bool:
    alg = MatrixAlgebra(sigma.target)
    y_inv = alg.inv(y)
    for x, image in iso.items():
        twisted = alg.mul(alg.mul(y_inv, _apply_entrywise(sigma, x)), y)
        if alg.scale(eta[x], twisted) != image:
            return False
    return True


def _scalar_class_rep(alg: MatrixAlgebra, y: Matrix, units: Sequence[Coeffs]) -> Matrix:
    return min(alg.scale(u, y) for u in units)


def conjugator_transversal(
    ring: RingDescriptor, search_cap: int = DEFAULT_SEARCH_CAP
) -> list[Matrix]:
    """
    GL_2(ring) modulo scalars, one representative per class (the smallest in
    tuple order), identity first.

    Raises:
        TooLarge: |M_2(ring)| exceeds ``search_cap``.
    """
    if ring.size**4 > search_cap:
        raise TooLarge(f"conjugator search over {ring.size**4} matrices exceeds {search_cap}")
    alg = MatrixAlgebra(ring)
    units = list(ring.units())
    elements = list(ring.elements())
    out = [alg.identity]
    seen = {_scalar_class_rep(alg, alg.identity, units)}
    for a in elements:
        for b in elements:
            for c in elements:
                for d in elements:
                    y = (a, b, c, d)
                    if not ring.is_unit(alg.det(y)):
                        continue
                    rep = _scalar_class_rep(alg, y, units)
                    if rep in seen:
                        continue
                    seen.add(rep)
                    out.append(rep)
    logger.debug(f"conjugator transversal over {ring}: {len(out)} classes")
    return out


def _derive_eta(
    alg: MatrixAlgebra, iso: dict[Matrix, Matrix], y: Matrix, sigma: RingMorphism
) -> dict[Matrix, Coeffs] | None:
    ring = alg.ring
    y_inv = alg.inv(y)
    eta: dict[Matrix, Coeffs] = {}
    for x, image in iso.items():
        twisted = alg.mul(alg.mul(y_inv, _apply_entrywise(sigma, x)), y)
        ratio = alg.mul(image, alg.inv(twisted))
        if not (ring.is_zero(ratio[1]) and ring.is_zero(ratio[2]) and ratio[0] == ratio[3]):
            return None
        eta[x] = ratio[0]
    for x in iso:
        for g in iso:
            product = eta.get(alg.mul(x, g))
            if product is not None and product != ring.mul(eta[x], eta[g]):
                return None
    return eta


def merzljakov_search(
    iso: dict[Matrix, Matrix],
    ring: RingDescriptor,
    limit: int = DEFAULT_AUTOMORPHISM_LIMIT,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> MerzljakovForm:
    """
    Find (η, y, σ) with α(x) = η(x)·y^-1 σ(x) y for every x.

    σ runs over ``ring_automorphisms`` and y over ``conjugator_transversal``,
    both identity first; η is read off pointwise and must be a scalar-valued
    homomorphism.

    Raises:
        NotFound: no triple reproduces α.
        TooLarge: from the automorphism or conjugator enumeration.
    """
    alg = MatrixAlgebra(ring)
    for x, image in iso.items():
        if len(x[0]) != ring.rank or len(image[0]) != ring.rank:
            raise RingMismatch(f"isomorphism entries do not live in {ring}")
    autos = ring_automorphisms(ring, limit, search_cap)
    transversal = conjugator_transversal(ring, search_cap)
    for sigma in autos:
        for y in transversal:
            eta = _derive_eta(alg, iso, y, sigma)
            if eta is not None:
                logger.info(f"Merzljakov form found: sigma={sigma.label}, y={alg.format(y)}")
                return MerzljakovForm(eta, y, sigma)
    raise NotFound(
        f"no (eta, y, sigma) over {len(autos)} automorphisms and {len(transversal)} conjugators"
    )
