"""
Dirichlet Characters — exact values in cyclotomic fields.

A character mod M is stored by the phases (elements of Q/Z, as Fractions in
[0, 1)) it assigns to a fixed set of generators of (Z/M)^×:

    odd p^e   primitive root mod p^e
    4         -1
    2^e, e>=3 -1 and 5

so χ(a) = exp(2πi·Σ k_i·phase_i) when a = Π g_i^k_i.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm

from sympy import divisors, factorint, primitive_root

from hida_fullness.errors import BadInput, IncompatibleCharacters, Unsupported
from hida_fullness.groups.cocycles import Cocycle2
from hida_fullness.groups.finite import FiniteGroup
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, RingKind, cyc_rational
from hida_fullness.rings.morphism import RingMorphism

logger = logging.getLogger(__name__)


@lru_cache(maxsize=256)
def unit_group(modulus: int) -> tuple[tuple[tuple[int, int], ...], dict[int, tuple[int, ...]]]:
    """
    Generators (g, order) of (Z/M)^× and the discrete-log table a -> exponents.
    """
    gens: list[tuple[int, int]] = []
    for p, e in sorted(factorint(modulus).items()):
        pe = p**e
        rest = modulus // pe
        local: list[tuple[int, int]] = []
        if p == 2:
            if e >= 2:
                local.append((pe - 1, 2))
            if e >= 3:
                local.append((5, 2 ** (e - 2)))
        else:
            local.append((int(primitive_root(pe)), (p - 1) * p ** (e - 1)))
        for g, order in local:
            # g mod p^e, 1 mod the rest
            lifted = g % modulus
            if rest > 1:
                lifted = (g * rest * pow(rest, -1, pe) + pe * pow(pe, -1, rest)) % modulus
            gens.append((lifted, order))

    table: dict[int, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(order) for _, order in gens)):
        a = 1
        for (g, _), k in zip(gens, exps, strict=True):
            a = a * pow(g, k, modulus) % modulus
        table[a % modulus if modulus > 1 else 0] = exps
    return tuple(gens), table


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    phases: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        gens, _ = unit_group(self.modulus)
        if len(self.phases) != len(gens):
            raise BadInput(f"a character mod {self.modulus} needs {len(gens)} generator phases")
        for (_, order), phase in zip(gens, self.phases, strict=True):
            if (Fraction(phase) * order).denominator != 1:
                raise BadInput(f"phase {phase} is not compatible with a generator of order {order}")
        object.__setattr__(self, "phases", tuple(Fraction(ph) % 1 for ph in self.phases))

    # ── constructors ──

    @classmethod
    def trivial(cls, modulus: int = 1) -> DirichletCharacter:
        gens, _ = unit_group(modulus)
        return cls(modulus, tuple(Fraction(0) for _ in gens))

    @classmethod
    def from_exponents(cls, modulus: int, exponents: tuple[int, ...]) -> DirichletCharacter:
        """The character sending generator i to exp(2πi·k_i/order_i)."""
        gens, _ = unit_group(modulus)
        pairs = zip(exponents, gens, strict=True)
        return cls(modulus, tuple(Fraction(k, order) for k, (_, order) in pairs))

    # ── values ──

    def phase(self, n: int) -> Fraction | None:
        """χ(n) as an element of Q/Z, or None when gcd(n, M) > 1."""
        if gcd(n, self.modulus) != 1:
            return None
        _, table = unit_group(self.modulus)
        exps = table[n % self.modulus if self.modulus > 1 else 0]
        return sum((k * ph for k, ph in zip(exps, self.phases, strict=True)), Fraction(0)) % 1

    @cached_property
    def order(self) -> int:
        return lcm(1, *(ph.denominator for ph in self.phases))

    def value(self, n: int, field: RingDescriptor | None = None) -> Coeffs:
        """χ(n) in Q(ζ_L); L defaults to the order of χ."""
        ring = field or cyc_rational(max(self.order, 1))
        if ring.kind is not RingKind.CYC_RATIONAL or ring.n % self.order:
            raise Unsupported(f"values of a character of order {self.order} do not lie in {ring}")
        ph = self.phase(n)
        if ph is None:
            return ring.zero
        return ring.power(ring.generator(), int(ph * ring.n))

    def sign(self, n: int) -> int:
        """χ(n) ∈ {0, 1, -1} for characters of order <= 2."""
        if self.order > 2:
            raise Unsupported("sign() is only defined for quadratic or trivial characters")
        ph = self.phase(n)
        if ph is None:
            return 0
        return 1 if ph == 0 else -1

    def is_trivial(self) -> bool:
        return all(ph == 0 for ph in self.phases)

    def parity(self) -> int:
        return 1 if self.phase(self.modulus - 1) == 0 else -1

    # ── arithmetic ──

    def _same_modulus(
        self, other: DirichletCharacter
    ) -> tuple[DirichletCharacter, DirichletCharacter]:
        m = lcm(self.modulus, other.modulus)
        return self.induce(m), other.induce(m)

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        a, b = self._same_modulus(other)
        phases = tuple(x + y for x, y in zip(a.phases, b.phases, strict=True))
        return DirichletCharacter(a.modulus, phases)

    def __pow__(self, e: int) -> DirichletCharacter:
        return DirichletCharacter(self.modulus, tuple(e * ph for ph in self.phases))

    def inverse(self) -> DirichletCharacter:
        return self**-1

    def same_as(self, other: DirichletCharacter) -> bool:
        """Equality after inducing to a common modulus."""
        a, b = self._same_modulus(other)
        return a.phases == b.phases

    def induce(self, modulus: int) -> DirichletCharacter:
        """χ viewed modulo a multiple of its modulus."""
        if modulus % self.modulus:
            raise BadInput(f"{modulus} is not a multiple of {self.modulus}")
        if modulus == self.modulus:
            return self
        gens, _ = unit_group(modulus)
        phases = []
        for g, _order in gens:
            phases.append(self.phase(g) or Fraction(0))
        return DirichletCharacter(modulus, tuple(phases))

    # ── conductor ──

    def factors_through(self, d: int) -> bool:
        """χ(a) = 1 for every unit a ≡ 1 mod d."""
        if self.modulus % d:
            return False
        for a in range(1, self.modulus, d):
            if gcd(a, self.modulus) == 1 and self.phase(a) != 0:
                return False
        return True

    @cached_property
    def conductor(self) -> int:
        for d in divisors(self.modulus):
            if self.factors_through(int(d)):
                return int(d)
        return self.modulus

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive_part(self) -> DirichletCharacter:
        """The primitive character mod c(χ) inducing χ."""
        c = self.conductor
        gens, _ = unit_group(c)
        phases = []
        for g, _order in gens:
            lift = g
            while gcd(lift, self.modulus) != 1:
                lift += c
            phases.append(self.phase(lift) or Fraction(0))
        return DirichletCharacter(c, tuple(phases))

    def label(self) -> str:
        if self.is_trivial():
            return f"1 mod {self.modulus}"
        return f"chi mod {self.modulus} [" + ",".join(str(ph) for ph in self.phases) + "]"

    def to_dict(self) -> dict[str, object]:
        return {
            "modulus": self.modulus,
            "phases": [str(ph) for ph in self.phases],
            "order": self.order,
            "conductor": self.conductor,
            "label": self.label(),
        }


# ──────────────────────────────────────────────
# Enumeration
# ──────────────────────────────────────────────


def all_characters(modulus: int) -> Iterator[DirichletCharacter]:
    gens, _ = unit_group(modulus)
    for exps in itertools.product(*(range(order) for _, order in gens)):
        yield DirichletCharacter.from_exponents(modulus, exps)


def primitive_characters(bound: int) -> list[DirichletCharacter]:
    """Primitive characters of conductor <= bound, trivial first, then by modulus."""
    out = []
    for m in range(1, bound + 1):
        out.extend(chi for chi in all_characters(m) if chi.is_primitive())
    return out


def quadratic_characters(modulus: int) -> list[DirichletCharacter]:
    return [chi for chi in all_characters(modulus) if chi.order == 2]


def chi_minus_4() -> DirichletCharacter:
    """The nontrivial character mod 4 (the Kronecker symbol (-4/·))."""
    return DirichletCharacter(4, (Fraction(1, 2),))


def legendre_character(p: int) -> DirichletCharacter:
    """(·/p) for an odd prime p."""
    return DirichletCharacter(p, (Fraction(1, 2),))


# ──────────────────────────────────────────────
# Gauss sums and Ribet's cocycle
# ──────────────────────────────────────────────


def gauss_field(*characters: DirichletCharacter) -> RingDescriptor:
    """Q(ζ_L) holding the Gauss sums of all given characters."""
    n = 1
    for chi in characters:
        prim = chi.primitive_part()
        n = lcm(n, prim.modulus, prim.order)
    return cyc_rational(n)


def gauss_sum(chi: DirichletCharacter, field: RingDescriptor | None = None) -> Coeffs:
    """G(χ) = Σ_{a mod c} χ_0(a) ζ_c^a for the primitive part χ_0, exactly."""
    prim = chi.primitive_part()
    c = prim.modulus
    ring = field or gauss_field(chi)
    if ring.n % c or ring.n % prim.order:
        raise Unsupported(f"{ring} does not contain the Gauss sum of a conductor-{c} character")
    z = ring.generator()
    total = ring.zero
    for a in range(c):
        ph = prim.phase(a)
        if ph is None:
            continue
        exponent = (int(ph * ring.n) + a * (ring.n // c)) % ring.n
        total = ring.add(total, ring.power(z, exponent))
    return total


def complex_conjugate(x: Coeffs, field: RingDescriptor) -> Coeffs:
    n = field.n
    z = field.generator()
    return RingMorphism(field, field, (field.power(z, n - 1),)).apply(x)


def ribet_cocycle(
    eta_s: DirichletCharacter,
    eta_t: DirichletCharacter,
    eta_st: DirichletCharacter,
    tau_power: int = 1,
    field: RingDescriptor | None = None,
) -> Coeffs:
    """
    c(σ, τ) = G(η_σ^-1) G(η_τ^-1) / G(η_στ^-1).

    ``tau_power`` is the exponent by which τ acts on roots of unity; the
    compatibility η_στ = η_σ^τ·η_τ is checked.

    Raises:
        IncompatibleCharacters: the compatibility fails.
    """
    if not eta_st.same_as(eta_s**tau_power * eta_t):
        raise IncompatibleCharacters(f"{eta_st.label()} != {eta_s.label()}^tau * {eta_t.label()}")
    inverses = [eta_s.inverse(), eta_t.inverse(), eta_st.inverse()]
    ring = field or gauss_field(*inverses)
    g_s, g_t, g_st = (gauss_sum(chi, ring) for chi in inverses)
    return ring.mul(ring.mul(g_s, g_t), ring.inverse(g_st))


def ribet_cocycle_table(
    group: FiniteGroup, etas: dict[int, DirichletCharacter], field: RingDescriptor | None = None
) -> Cocycle2:
    """Ribet's cocycle on a twist table (trivial action on values)."""
    ring = field or gauss_field(*etas.values())
    values = {}
    for s in group.elements:
        for t in group.elements:
            values[(s, t)] = ribet_cocycle(etas[s], etas[t], etas[group.mul(s, t)], field=ring)
    logger.debug(f"Ribet cocycle tabulated over {ring}")
    return Cocycle2(group, ring, values)
