"""
Ring Morphisms — maps determined by the images of ring generators.

Covers specialization at arithmetic primes, automorphism searches (Frobenius
powers, cyclotomic Galois action, root searches for monogenic extensions and
substitutions T -> t on truncations) and reduction maps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from hida_fullness.errors import BadDomain, TooLarge, Unsupported
from hida_fullness.lattices.howell import kernel_lattice
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, RingKind, zmod

logger = logging.getLogger(__name__)

DEFAULT_AUTOMORPHISM_LIMIT = 16
DEFAULT_SEARCH_CAP = 100_000


def generators(ring: RingDescriptor) -> list[Coeffs]:
    """Generators whose images determine a unital morphism out of ``ring``."""
    match ring.kind:
        case RingKind.ZMOD_PA | RingKind.RATIONAL:
            return []
        case RingKind.FINITE_FIELD:
            return [] if ring.field_degree == 1 else [ring.generator()]
        case RingKind.TRUNC_IWASAWA | RingKind.CYC_RATIONAL:
            return [ring.generator()]
        case RingKind.MONOGENIC_EXT:
            assert ring.base is not None
            return [ring.embed_base(g) for g in generators(ring.base)] + [
                ring.basis_vector(ring.base.rank) if ring.ext_degree > 1 else ring.generator()
            ]
        case RingKind.QUOTIENT:
            assert ring.base is not None
            return [ring.embed_base(g) for g in generators(ring.base)]
    raise Unsupported(f"no generators for {ring}")


@dataclass(frozen=True)
class RingMorphism:
    """
    Unital ring map ``source -> target`` sending ``generators(source)[i]`` to
    ``images[i]``.
    """

    source: RingDescriptor
    target: RingDescriptor
    images: tuple[Coeffs, ...]
    label: str = ""

    @classmethod
    def identity(cls, ring: RingDescriptor) -> RingMorphism:
        return cls(ring, ring, tuple(generators(ring)), label="id")

    def apply(self, x: Coeffs) -> Coeffs:
        src, tgt = self.source, self.target
        match src.kind:
            case RingKind.ZMOD_PA:
                return tgt.from_int(int(x[0]))
            case RingKind.RATIONAL:
                return tgt.from_fraction(Fraction(x[0]))
            case RingKind.FINITE_FIELD if src.field_degree == 1:
                return tgt.from_int(int(x[0]))
            case RingKind.TRUNC_IWASAWA | RingKind.FINITE_FIELD:
                consts = [tgt.from_int(int(c)) for c in x]
                return tgt.evaluate(consts, self.images[0])
            case RingKind.CYC_RATIONAL:
                consts = [tgt.from_fraction(Fraction(c)) for c in x]
                return tgt.evaluate(consts, self.images[0])
            case RingKind.MONOGENIC_EXT:
                base = src.base
                assert base is not None
                inner = RingMorphism(base, tgt, self.images[:-1])
                br = base.rank
                parts = [
                    inner.apply(tuple(x[i * br : (i + 1) * br])) for i in range(src.ext_degree)
                ]
                return tgt.evaluate(parts, self.images[-1])
            case RingKind.QUOTIENT:
                assert src.base is not None
                return RingMorphism(src.base, tgt, self.images).apply(x)
        raise Unsupported(f"cannot evaluate morphisms out of {src}")

    def __call__(self, x: Coeffs) -> Coeffs:
        return self.apply(x)

    def compose(self, first: RingMorphism) -> RingMorphism:
        """self ∘ first."""
        if first.target != self.source:
            raise BadDomain(f"cannot compose: {first.target} is not {self.source}")
        return RingMorphism(
            first.source,
            self.target,
            tuple(self.apply(img) for img in first.images),
            label=f"{self.label}∘{first.label}" if self.label and first.label else "",
        )

    # ── validation ────────────────────────────

    def defining_relations_hold(self) -> bool:
        """Images satisfy every defining relation of the source (well-definedness)."""
        src, tgt = self.source, self.target
        if src.is_finite and not tgt.is_zero(tgt.from_int(src.modulus)):
            return False
        match src.kind:
            case RingKind.TRUNC_IWASAWA:
                return tgt.is_zero(tgt.power(self.images[0], src.b))
            case RingKind.FINITE_FIELD if src.field_degree > 1:
                coeffs = [tgt.from_int(c) for c in src.field_poly]
                return tgt.is_zero(tgt.evaluate(coeffs, self.images[0]))
            case RingKind.CYC_RATIONAL:
                coeffs = [tgt.from_int(c) for c in src.cyclotomic_poly]
                return tgt.is_zero(tgt.evaluate(coeffs, self.images[0]))
            case RingKind.MONOGENIC_EXT:
                assert src.base is not None
                inner = RingMorphism(src.base, tgt, self.images[:-1])
                if not inner.defining_relations_hold():
                    return False
                coeffs = [inner.apply(c) for c in src.ext_poly]
                return tgt.is_zero(tgt.evaluate(coeffs, self.images[-1]))
            case RingKind.QUOTIENT:
                assert src.base is not None
                inner = RingMorphism(src.base, tgt, self.images)
                if not inner.defining_relations_hold():
                    return False
                return all(tgt.is_zero(inner.apply(row)) for row in src.ideal_rows)
        return True

    def check_homomorphism(self) -> bool:
        """Relations hold, 1 -> 1, and × is preserved on all basis pairs."""
        src, tgt = self.source, self.target
        if not self.defining_relations_hold():
            return False
        if self.apply(src.one) != tgt.one:
            return False
        basis = [src.basis_vector(i) for i in range(src.rank)]
        images = [self.apply(e) for e in basis]
        for i, ei in enumerate(basis):
            for j, ej in enumerate(basis):
                if self.apply(src.mul(ei, ej)) != tgt.mul(images[i], images[j]):
                    return False
        return True

    def kernel_rows(self) -> list[tuple[int, ...]]:
        """Basis of the kernel in source coordinates (finite rings of equal modulus)."""
        src, tgt = self.source, self.target
        if src.modulus != tgt.modulus or not src.is_finite:
            raise Unsupported("kernel computation needs finite rings of equal modulus")
        rows = [tuple(int(c) for c in self.apply(src.basis_vector(i))) for i in range(src.rank)]
        kernel = kernel_lattice(rows, tgt.relations(), src.modulus)
        if src.kind is RingKind.QUOTIENT:
            return [r for r in kernel.basis if not src.ideal_lattice.contains(r)]
        return list(kernel.basis)

    def is_bijective(self) -> bool:
        src, tgt = self.source, self.target
        if not (src.is_finite and tgt.is_finite) or src.size != tgt.size:
            return False
        if src.modulus == tgt.modulus:
            return not self.kernel_rows()
        seen = {self.apply(x) for x in src.elements()}
        return len(seen) == src.size

    def describe(self) -> dict[str, object]:
        gens = generators(self.source)
        return {
            "label": self.label,
            "source": str(self.source),
            "target": str(self.target),
            "images": {
                self.source.format(g): self.target.format(img)
                for g, img in zip(gens, self.images, strict=True)
            },
        }


# ──────────────────────────────────────────────
# Constructions
# ──────────────────────────────────────────────


def arithmetic_prime_spec(k: int, ring: RingDescriptor, epsilon: int = 1) -> RingMorphism:
    """
    Specialization A -> Z/p^a at the arithmetic prime (1 + T - (1+p)^(k+1)).

    Raises:
        Unsupported: epsilon is not the trivial character.
        BadDomain: ring is not a truncation, or the image of T is not nilpotent enough.
    """
    if epsilon != 1:
        raise Unsupported("only arithmetic primes with trivial epsilon are supported")
    if ring.kind is not RingKind.TRUNC_IWASAWA:
        raise BadDomain(f"arithmetic primes live on truncated Iwasawa algebras, not {ring}")
    target = zmod(ring.p, ring.a)
    t = (pow(1 + ring.p, k + 1, target.modulus) - 1) % target.modulus
    morphism = RingMorphism(ring, target, ((t,),), label=f"P_{k}")
    if not morphism.defining_relations_hold():
        raise BadDomain(f"T -> {t} does not kill T^{ring.b} in {target}")
    logger.debug(f"arithmetic prime k={k} on {ring}: T -> {t}")
    return morphism


def _check_search_size(ring: RingDescriptor, search_cap: int) -> None:
    if ring.size > search_cap:
        raise TooLarge(f"automorphism search over {ring.size} elements exceeds {search_cap}")


def ring_automorphisms(
    ring: RingDescriptor,
    limit: int = DEFAULT_AUTOMORPHISM_LIMIT,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> list[RingMorphism]:
    """
    All automorphisms of ``ring`` (fixing the base for monogenic extensions).

    The identity is always first.

    Raises:
        TooLarge: the candidate space exceeds ``search_cap`` or more than
            ``limit`` automorphisms exist.
        Unsupported: quotient rings.
    """
    found: list[RingMorphism]
    match ring.kind:
        case RingKind.ZMOD_PA | RingKind.RATIONAL:
            found = [RingMorphism.identity(ring)]
        case RingKind.FINITE_FIELD:
            found = []
            for i in range(ring.field_degree):
                images = tuple(ring.frobenius(g, i) for g in generators(ring))
                label = "id" if i == 0 else f"Frob^{i}"
                found.append(RingMorphism(ring, ring, images, label=label))
        case RingKind.CYC_RATIONAL:
            z = ring.generator()
            found = [
                RingMorphism(ring, ring, (ring.power(z, k),), label="id" if k == 1 else f"z->z^{k}")
                for k in range(1, max(ring.n, 1) + 1)
                if gcd(k, ring.n) == 1
            ]
        case RingKind.TRUNC_IWASAWA | RingKind.MONOGENIC_EXT:
            _check_search_size(ring, search_cap)
            found = _root_search(ring)
        case _:
            raise Unsupported(f"automorphism search is not available for {ring}")

    if len(found) > limit:
        raise TooLarge(f"{ring} has {len(found)} automorphisms, above the limit {limit}")
    logger.debug(f"{len(found)} automorphisms of {ring}")
    return found


def _root_search(ring: RingDescriptor) -> list[RingMorphism]:
    gens = generators(ring)
    fixed = tuple(gens[:-1])
    identity = RingMorphism.identity(ring)
    found = [identity]
    for candidate in ring.elements():
        if candidate == gens[-1]:
            continue
        morphism = RingMorphism(ring, ring, fixed + (tuple(candidate),))
        if morphism.defining_relations_hold() and morphism.is_bijective():
            label = f"{ring.variable}->{ring.format(candidate)}"
            found.append(RingMorphism(ring, ring, morphism.images, label=label))
    return found
