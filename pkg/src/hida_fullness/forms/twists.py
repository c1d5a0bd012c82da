"""
Twisting — the maps a(n) -> η(n)a(n), level raising to f_M, and conjugate
self-twists (σ, η) with σ(a(ℓ)) = η(ℓ)a(ℓ) for almost all primes ℓ.

Comparisons happen in a common field: the coefficient ring itself when it
holds the values of η, otherwise Q(ζ_L) with the coefficients embedded.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import gcd, lcm

from sympy import factorint, isprime, primerange

from hida_fullness.errors import BadInput, BadLevel, NotEigen, TooLarge, Unsupported, Unverified
from hida_fullness.forms.characters import DirichletCharacter, primitive_characters
from hida_fullness.forms.qexpansion import (
    QExpansion,
    character_value,
    hecke_eigenvalue,
    hecke_factor,
    u_operator,
    v_operator,
)
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, RingKind, cyc_rational
from hida_fullness.rings.morphism import DEFAULT_SEARCH_CAP, RingMorphism, ring_automorphisms

logger = logging.getLogger(__name__)

MIN_TWIST_PRIMES = 10


def m_level(psi: DirichletCharacter, eta: DirichletCharacter, level: int) -> int:
    """lcm(L, c(ψ)², c(ψ)c(η))."""
    c_psi = psi.conductor
    return lcm(level, c_psi * c_psi, c_psi * eta.conductor)


def twist_map(f: QExpansion, eta: DirichletCharacter, level: int) -> QExpansion:
    """
    Σ a(n)qⁿ -> Σ η(n)a(n)qⁿ, landing in level M with character ψη².

    Raises:
        BadLevel: M is not a multiple of m_level(ψ, η, N).
    """
    required = m_level(f.nebentypus, eta, f.level)
    if level % required:
        raise BadLevel(f"level {level} is not a multiple of M(psi, eta) = {required}")
    ring = f.ring
    coeffs = [ring.mul(character_value(eta, n, ring), f.a(n)) for n in range(1, f.precision + 1)]
    return f.with_coeffs(
        coeffs,
        level=level,
        character=f.nebentypus * eta * eta,
        label=f"{f.label}⊗{eta.label()}",
    )


# ──────────────────────────────────────────────
# Level raising
# ──────────────────────────────────────────────


def _kill_prime(g: QExpansion, ell: int) -> QExpansion:
    """One step of f_M: remove the U(ℓ)-eigenvalue at ℓ, raising the level by ℓ."""
    ring = g.ring
    if gcd(ell, g.level) == 1:
        lam = hecke_eigenvalue(g, ell)
        eps = hecke_factor(g, ell)
        once = v_operator(g, ell)
        twice = v_operator(once, ell)
        out = g.sub(once.scale(lam)).sub(twice.scale(ring.neg(eps)))
    else:
        lam = g.a(ell)
        if not u_operator(g, ell).agrees_with(g.scale(lam)):
            raise NotEigen(f"{g.label or 'f'} is not a U({ell}) eigenform")
        if ring.is_zero(lam):
            return g.with_coeffs(g.coeffs, level=g.level * ell)
        out = g.sub(v_operator(g, ell).scale(lam))
    logger.debug(f"killed U({ell}) eigenvalue {ring.format(lam)} at level {g.level}")
    return out.with_coeffs(out.coeffs, level=g.level * ell)


def build_fM(f: QExpansion, level_n: int, level_m: int) -> QExpansion:  # noqa: N802
    """
    Raise f from level N to level M, killing the U(ℓ)-eigenvalue at every
    prime ℓ | M/N so that f_M|T(ℓ) = 0 while T(n) for (n, M/N) = 1 keeps its
    eigenvalue.

    Raises:
        BadInput: N does not divide M, or f's level does not divide N.
        NotEigen: f is not an eigenform at some ℓ | M/N.
    """
    if level_m % level_n or level_n % f.level:
        raise BadInput(f"need level(f) | N | M, got {f.level}, {level_n}, {level_m}")
    current = f.with_coeffs(f.coeffs, level=level_n)
    for ell, e in sorted(factorint(level_m // level_n).items()):
        for _ in range(e):
            current = _kill_prime(current, int(ell))
    return current.with_coeffs(current.coeffs, label=f"{f.label}_M{level_m}")


# ──────────────────────────────────────────────
# Coefficient comparison in a common field
# ──────────────────────────────────────────────


def twist_field(
    ring: RingDescriptor, eta: DirichletCharacter
) -> tuple[RingDescriptor, RingMorphism]:
    """
    A ring holding both the coefficients and the values of η, with the
    embedding of the coefficient ring.

    Raises:
        Unsupported: no such ring is available.
    """
    match ring.kind:
        case RingKind.RATIONAL:
            target = ring if eta.order <= 2 else cyc_rational(eta.order)
            return target, RingMorphism(ring, target, (), label="incl")
        case RingKind.CYC_RATIONAL:
            n = lcm(ring.n, eta.order)
            if n == ring.n:
                return ring, RingMorphism.identity(ring)
            target = cyc_rational(n)
            image = target.power(target.generator(), n // ring.n)
            return target, RingMorphism(ring, target, (image,), label="incl")
    character_value(eta, 1, ring)
    for k in range(2, eta.modulus + 1):
        if gcd(k, eta.modulus) == 1:
            character_value(eta, k, ring)
    return ring, RingMorphism.identity(ring)


def _twist_holds(
    a: Coeffs,
    sigma: RingMorphism,
    eta: DirichletCharacter,
    n: int,
    field_: RingDescriptor,
    emb: RingMorphism,
) -> bool:
    left = emb(sigma(a))
    right = field_.mul(character_value(eta, n, field_), emb(a))
    return left == right


@dataclass
class TwistPair:
    sigma: RingMorphism
    eta: DirichletCharacter
    verified_primes: tuple[int, ...]
    reverified_primes: tuple[int, ...] = ()

    @property
    def is_inner(self) -> bool:
        return self.sigma.images == RingMorphism.identity(self.sigma.source).images

    def to_dict(self) -> dict[str, object]:
        return {
            "sigma": self.sigma.label or "?",
            "eta": self.eta.to_dict(),
            "verified_primes": list(self.verified_primes),
            "reverified_primes": list(self.reverified_primes),
        }


@dataclass
class TwistReport:
    detected: list[TwistPair]
    primes: tuple[int, ...]
    reverify_primes: tuple[int, ...]
    candidates: int
    dropped: list[str] = field(default_factory=list)

    @property
    def cm_flag(self) -> bool:
        """(1, η) with η nontrivial is a conjugate self-twist."""
        return any(pair.is_inner and not pair.eta.is_trivial() for pair in self.detected)

    def to_dict(self) -> dict[str, object]:
        return {
            "cm_flag": self.cm_flag,
            "detected": [pair.to_dict() for pair in self.detected],
            "primes": list(self.primes),
            "reverify_primes": list(self.reverify_primes),
            "candidates": self.candidates,
            "dropped_on_reverification": self.dropped,
        }


def verify_twist_diagram(
    f: QExpansion, level_m: int, sigma: RingMorphism, eta: DirichletCharacter
) -> bool:
    """
    The θ-duality diagram for (σ, η) commutes iff σ(a(n, f_M)) = η(n)a(n, f_M)
    for every n; checked on the whole truncation.
    """
    expected = eta.conductor * f.level * f.level
    if level_m != expected:
        logger.warning(f"twist diagram checked at level {level_m}, not c(eta)N^2 = {expected}")
    f_m = build_fM(f, f.level, level_m)
    field_, emb = twist_field(f.ring, eta)
    for n in range(1, f_m.precision + 1):
        if not _twist_holds(f_m.a(n), sigma, eta, n, field_, emb):
            logger.debug(f"twist diagram fails at a({n}) for {eta.label()}")
            return False
    return True


def _usable(primes: Sequence[int], f: QExpansion, eta: DirichletCharacter) -> list[int]:
    bad = f.level * eta.modulus
    return [ell for ell in primes if ell <= f.precision and bad % ell]


def detect_self_twists(
    f: QExpansion,
    moduli_bound: int,
    primes: Sequence[int],
    reverify: Sequence[int] | None = None,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> TwistReport:
    """
    Every (σ, η) with σ an automorphism of the coefficient ring and η a
    primitive character of conductor <= ``moduli_bound`` that satisfies the
    twist identity on ``primes`` (those not dividing level·c(η)). Surviving
    pairs are re-checked on a disjoint prime list, by default the remaining
    primes up to the precision.

    Raises:
        BadInput: fewer than 10 of the primes are within the precision.
        TooLarge: more than ``search_cap`` candidate pairs.
    """
    primes = tuple(ell for ell in primes if isprime(ell))
    in_range = [ell for ell in primes if ell <= f.precision]
    if len(in_range) < MIN_TWIST_PRIMES:
        raise BadInput(
            f"insufficient primes: {len(in_range)} prime-indexed coefficients, "
            f"need {MIN_TWIST_PRIMES}"
        )
    if reverify is None:
        reverify = [ell for ell in primerange(2, f.precision + 1) if ell not in primes]
    reverify = tuple(ell for ell in reverify if ell not in primes)

    autos = ring_automorphisms(f.ring)
    characters = primitive_characters(moduli_bound)
    candidates = len(autos) * len(characters)
    if candidates > search_cap:
        raise TooLarge(f"{candidates} (sigma, eta) candidates exceed {search_cap}")

    detected: list[TwistPair] = []
    dropped: list[str] = []
    for sigma in autos:
        for eta in characters:
            try:
                field_, emb = twist_field(f.ring, eta)
            except Unsupported:
                continue
            checked = _usable(in_range, f, eta)
            if not all(_twist_holds(f.a(ell), sigma, eta, ell, field_, emb) for ell in checked):
                continue
            fresh = _usable(reverify, f, eta)
            if not all(_twist_holds(f.a(ell), sigma, eta, ell, field_, emb) for ell in fresh):
                dropped.append(f"({sigma.label}, {eta.label()})")
                logger.warning(f"{dropped[-1]} failed on the reverification primes")
                continue
            detected.append(TwistPair(sigma, eta, tuple(checked), tuple(fresh)))

    report = TwistReport(detected, primes, reverify, candidates, dropped)
    logger.info(
        f"{len(detected)} conjugate self-twists among {candidates} candidates, "
        f"cm_flag={report.cm_flag}"
    )
    return report


def psi_injective(family: TwistReport, specializations: Sequence[TwistReport]) -> bool:
    """
    The map (σ, η) -> η from the family's self-twists to those of each
    specialization is well defined and injective.
    """
    etas = [pair.eta.primitive_part() for pair in family.detected]
    for i, eta in enumerate(etas):
        if any(eta.same_as(other) for other in etas[:i]):
            return False
    for report in specializations:
        targets = [pair.eta.primitive_part() for pair in report.detected]
        if not all(any(eta.same_as(t) for t in targets) for eta in etas):
            return False
    return True


# ──────────────────────────────────────────────
# Constraints on twist characters
# ──────────────────────────────────────────────


def eta_quadratic_constraint(
    chi: DirichletCharacter, eta: DirichletCharacter, sigma_power: int = 1
) -> bool:
    """η² = χ^σ χ⁻¹, with σ acting on values as ζ -> ζ^sigma_power."""
    return (eta * eta).same_as(chi**sigma_power * chi.inverse())


def b_ell_invariance(
    a_ell: Coeffs, det_ell: Coeffs, sigmas: Sequence[RingMorphism], ring: RingDescriptor
) -> bool:
    """b_ℓ = a(ℓ)²/det ρ(Frob_ℓ) is fixed by every σ. Raises NonUnit."""
    b = ring.mul(ring.mul(a_ell, a_ell), ring.inverse(det_ell))
    return all(sigma(b) == b for sigma in sigmas)


def _two_part(n: int) -> int:
    return n & -n


def quadratic_nebentypus_reduction(chi: DirichletCharacter) -> DirichletCharacter:
    """
    Write χ = χ₂·ξ with χ₂ of 2-power order and ξ of odd order 2n - 1; then
    ψ = ξ^-n makes ψ²χ = χ₂ of 2-power order.
    """
    order = chi.order
    two = _two_part(order)
    odd = order // two
    if odd > 1:
        xi = chi ** (two * pow(two, -1, odd) % order)
    else:
        xi = DirichletCharacter.trivial(chi.modulus)
    n = (odd + 1) // 2
    psi = xi**-n
    twisted = psi * psi * chi
    if _two_part(twisted.order) != twisted.order:
        raise Unverified(f"ψ²χ has order {twisted.order}, not a power of 2")
    return psi
