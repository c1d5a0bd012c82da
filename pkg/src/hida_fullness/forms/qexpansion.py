"""
Truncated q-expansions Σ_{n=1}^{N} a(n) qⁿ and the operators acting on them.

Every operator records its output precision: T(n) and U(ℓ) shorten by the
factor n (resp. ℓ), V(ℓ) lengthens by ℓ. Nothing is zero-padded.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

from sympy import divisors, primitive_root

from hida_fullness.errors import BadInput, NotEigen, TruncationTooShort, Unsupported
from hida_fullness.forms.characters import DirichletCharacter
from hida_fullness.groups.teichmuller import residue_field_size
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, RingKind
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.padic import kappa, teichmuller

logger = logging.getLogger(__name__)

MAX_PRECISION = 10_000


def character_value(chi: DirichletCharacter, n: int, ring: RingDescriptor) -> Coeffs:
    """
    χ(n) inside a coefficient ring.

    Quadratic values are ±1 everywhere; higher orders need Q(ζ_L) with
    ord(χ) | L, or a finite ring whose residue field holds ord(χ)-th roots of
    unity (the Teichmüller lift of a fixed primitive root is used).

    Raises:
        Unsupported: the ring has no roots of unity of the needed order.
    """
    ph = chi.phase(n)
    if ph is None:
        return ring.zero
    if ph == 0:
        return ring.one
    if chi.order == 2:
        return ring.from_int(-1)
    order = chi.order
    k = int(ph * order)
    match ring.kind:
        case RingKind.CYC_RATIONAL if ring.n % order == 0:
            return ring.power(ring.generator(), k * (ring.n // order))
        case RingKind.FINITE_FIELD | RingKind.ZMOD_PA | RingKind.TRUNC_IWASAWA:
            q = residue_field_size(ring)
            if (q - 1) % order == 0:
                root = _unit_root(ring)
                return ring.power(root, k * ((q - 1) // order))
    raise Unsupported(f"a character of order {order} has no values in {ring}")


def _unit_root(ring: RingDescriptor) -> Coeffs:
    if ring.kind is RingKind.FINITE_FIELD:
        return ring.field_generator
    g = ring.from_int(int(primitive_root(ring.p)))
    return teichmuller(RingElement(ring, g)).coeffs


@dataclass(frozen=True)
class QExpansion:
    """
    a(1), …, a(N) over ``ring``.

    Classical context: ``weight`` k with nebentypus ``character``. Λ-adic
    context: ``weight`` is None, the ring is a truncated Iwasawa algebra and
    ``character`` is the tame character χ; Hecke operators then use κ.
    """

    ring: RingDescriptor
    coeffs: tuple[Coeffs, ...]
    level: int
    weight: int | None = None
    character: DirichletCharacter | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.level < 1:
            raise BadInput(f"level must be positive, got {self.level}")
        if len(self.coeffs) > MAX_PRECISION:
            raise BadInput(f"precision {len(self.coeffs)} exceeds {MAX_PRECISION}")
        if self.weight is None and self.ring.kind is not RingKind.TRUNC_IWASAWA:
            raise BadInput("a Λ-adic expansion needs truncated Iwasawa coefficients")

    @classmethod
    def from_values(
        cls,
        ring: RingDescriptor,
        values: Sequence[int | Fraction | Coeffs],
        level: int,
        weight: int | None = None,
        character: DirichletCharacter | None = None,
        label: str = "",
    ) -> QExpansion:
        return cls(
            ring,
            tuple(RingElement.of(ring, v).coeffs for v in values),
            level,
            weight,
            character,
            label,
        )

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def is_lambda_adic(self) -> bool:
        return self.weight is None

    @property
    def nebentypus(self) -> DirichletCharacter:
        return self.character or DirichletCharacter.trivial(self.level)

    def a(self, n: int) -> Coeffs:
        if n < 1:
            raise BadInput(f"coefficients are indexed from 1, got {n}")
        if n > self.precision:
            raise TruncationTooShort(f"a({n}) requested but precision is {self.precision}")
        return self.coeffs[n - 1]

    def with_coeffs(self, coeffs: Sequence[Coeffs], **changes: object) -> QExpansion:
        return replace(self, coeffs=tuple(coeffs), **changes)  # type: ignore[arg-type]

    def agrees_with(self, other: QExpansion) -> bool:
        """Equality on the common range of precision."""
        n = min(self.precision, other.precision)
        return self.coeffs[:n] == other.coeffs[:n]

    def sub(self, other: QExpansion) -> QExpansion:
        n = min(self.precision, other.precision)
        r = self.ring
        return self.with_coeffs([r.sub(x, y) for x, y in zip(self.coeffs[:n], other.coeffs[:n])])

    def scale(self, c: Coeffs) -> QExpansion:
        r = self.ring
        return self.with_coeffs([r.mul(c, x) for x in self.coeffs])

    def to_dict(self) -> dict[str, object]:
        return {
            "label": self.label,
            "ring": str(self.ring),
            "level": self.level,
            "weight": self.weight,
            "character": self.nebentypus.to_dict(),
            "precision": self.precision,
            "coefficients": [self.ring.format(c) for c in self.coeffs],
        }


# ──────────────────────────────────────────────
# Hecke operators
# ──────────────────────────────────────────────


def hecke_factor(f: QExpansion, d: int) -> Coeffs:
    """
    The weight of a(mn/d²) in a(m, f|T(n)): ψ(d)d^(k-1) classically,
    κ(⟨d⟩)χ(d)d^-1 in the Λ-adic context. Zero when d shares a prime with the
    level (those T(ℓ) act as U(ℓ)).
    """
    ring = f.ring
    if d == 1:
        return ring.one
    if f.is_lambda_adic:
        if gcd(d, f.level * ring.p) != 1:
            return ring.zero
        chi = character_value(f.nebentypus, d, ring)
        return ring.mul(ring.mul(kappa(d, ring).coeffs, chi), ring.inverse(ring.from_int(d)))
    if gcd(d, f.level) != 1:
        return ring.zero
    assert f.weight is not None
    if f.weight < 1:
        raise BadInput(f"weight {f.weight} is not positive")
    return ring.mul(character_value(f.nebentypus, d, ring), ring.from_int(d ** (f.weight - 1)))


def hecke_T(f: QExpansion, n: int) -> QExpansion:
    """
    a(m, f|T(n)) = Σ_{d | (m, n)} ε(d) a(mn/d²), with ε from ``hecke_factor``.

    Raises:
        TruncationTooShort: n exceeds the precision.
    """
    if n < 1:
        raise BadInput(f"T(n) needs n >= 1, got {n}")
    precision = f.precision // n
    if precision < 1:
        raise TruncationTooShort(f"T({n}) needs a({n}) but precision is {f.precision}")
    ring = f.ring
    factors = {int(d): hecke_factor(f, int(d)) for d in divisors(n)}
    out = []
    for m in range(1, precision + 1):
        total = ring.zero
        for d in divisors(gcd(m, n)):
            eps = factors[int(d)]
            if ring.is_zero(eps):
                continue
            total = ring.add(total, ring.mul(eps, f.a(m * n // (int(d) * int(d)))))
        out.append(total)
    return f.with_coeffs(out, label=f"{f.label}|T({n})")


def u_operator(f: QExpansion, ell: int) -> QExpansion:
    """a(m, f|U(ℓ)) = a(mℓ, f)."""
    precision = f.precision // ell
    if precision < 1:
        raise TruncationTooShort(f"U({ell}) needs a({ell}) but precision is {f.precision}")
    coeffs = [f.a(m * ell) for m in range(1, precision + 1)]
    return f.with_coeffs(coeffs, label=f"{f.label}|U({ell})")


def u_p(f: QExpansion, p: int | None = None) -> QExpansion:
    p = p or f.ring.prime
    return u_operator(f, p)


def ordinarity(f: QExpansion, p: int | None = None) -> bool:
    """Whether a(p) is a p-adic unit."""
    ring = f.ring
    if ring.kind is RingKind.RATIONAL and p is None:
        raise BadInput("ordinarity of a rational expansion needs an explicit p")
    ap = f.a(p or ring.prime)
    if ring.is_finite:
        return ring.is_unit(ap)
    if ring.kind is RingKind.RATIONAL and p is not None:
        value = Fraction(ap[0])
        return value.numerator % p != 0 and value.denominator % p != 0
    raise Unsupported(f"ordinarity is not decided over {ring}")


def v_operator(f: QExpansion, ell: int) -> QExpansion:
    """(f|[ℓ])(z) = f(ℓz); the level becomes Nℓ."""
    ring = f.ring
    out = [f.a(n // ell) if n % ell == 0 else ring.zero for n in range(1, f.precision * ell + 1)]
    return f.with_coeffs(out, level=f.level * ell, label=f"{f.label}|[{ell}]")


def u_v_identity(f: QExpansion, ell: int) -> bool:
    """f|[ℓ]|U(ℓ) = f (T(ℓ) acts as U(ℓ) at the raised level)."""
    raised = v_operator(f, ell)
    return hecke_T(raised, ell).agrees_with(f) and u_operator(raised, ell).agrees_with(f)


def hecke_eigenvalue(f: QExpansion, ell: int) -> Coeffs:
    """
    a(ℓ) after checking f|T(ℓ) = a(ℓ)f on the available range.

    Raises:
        NotEigen: f is not normalized or the check fails.
    """
    ring = f.ring
    if f.a(1) != ring.one:
        raise NotEigen(f"{f.label or 'f'} is not normalized (a(1) != 1)")
    lam = f.a(ell)
    image = hecke_T(f, ell)
    expected = f.scale(lam)
    if not image.agrees_with(expected):
        name = f.label or "f"
        raise NotEigen(f"{name} is not a T({ell}) eigenform to precision {image.precision}")
    return lam
