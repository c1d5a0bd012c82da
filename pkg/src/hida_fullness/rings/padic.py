"""
p-adic helpers on truncations: square roots on 1 + m, Teichmüller lifts,
the Iwasawa character kappa and the substitution T -> (1+T)^-1 - 1.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import comb, factorial

from hida_fullness.errors import BadDomain, BadInput, NonUnit, Unsupported
from hida_fullness.rings.descriptor import RingDescriptor, RingKind
from hida_fullness.rings.element import RingElement

logger = logging.getLogger(__name__)


def _vp(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _half_binomial(n: int) -> Fraction:
    """C(1/2, n)."""
    out = Fraction(1)
    for i in range(n):
        out *= Fraction(1, 2) - i
    return out / factorial(n)


def sqrt_one_plus_m(x: RingElement) -> RingElement:
    """
    Square root of x in 1 + m via the binomial series Σ C(1/2, n)(x-1)^n.

    The series terminates because m is nilpotent.

    Raises:
        BadDomain: x - 1 is not in the maximal ideal.
    """
    ring = x.ring
    y = x - 1
    if not ring.is_finite:
        if y.is_zero():
            return RingElement(ring, ring.one)
        raise BadDomain(f"sqrt on 1 + m needs a finite local ring, got {ring}")
    if not y.is_nilpotent():
        raise BadDomain(f"{x} is not congruent to 1 modulo the maximal ideal")

    result = RingElement(ring, ring.one)
    term = RingElement(ring, ring.one)
    n = 0
    while True:
        n += 1
        term = term * y
        if term.is_zero():
            break
        result = result + RingElement(ring, ring.from_fraction(_half_binomial(n))) * term
    return result


def teichmuller(u: RingElement) -> RingElement:
    """
    Teichmüller representative: fixed point of x -> x^p started at the residue of u.
    """
    ring = u.ring
    if not u.is_unit():
        raise NonUnit(f"teichmuller needs a unit, got {u}")
    match ring.kind:
        case RingKind.ZMOD_PA:
            start = u.coeffs
        case RingKind.TRUNC_IWASAWA:
            start = (u.coeffs[0],) + (0,) * (ring.rank - 1)
        case RingKind.FINITE_FIELD:
            return u
        case _:
            raise Unsupported(f"teichmuller is defined on Z/p^a and truncations, not {ring}")

    x = RingElement(ring, start)
    while True:
        nxt = x ** ring.p
        if nxt == x:
            return x
        x = nxt


# ──────────────────────────────────────────────
# kappa
# ──────────────────────────────────────────────


def _teichmuller_int(ell: int, p: int, modulus: int) -> int:
    x = ell % modulus
    while True:
        nxt = pow(x, p, modulus)
        if nxt == x:
            return x
        x = nxt


def _log_one_plus(x: int, p: int, precision: int) -> int:
    """log(1 + x) mod p^precision for x ≡ 0 mod p."""
    modulus = p**precision
    total = 0
    for n in range(1, 2 * precision + 3):
        v = _vp(n, p)
        power = x**n
        term = (power // p**v) * pow(n // p**v, -1, modulus)
        total += term if n % 2 else -term
    return total % modulus


def exponent_s(ell: int, p: int, precision: int) -> int:
    """s with <ell> = (1+p)^s, modulo p^precision."""
    working = precision + 2
    modulus = p**working
    omega = _teichmuller_int(ell, p, modulus)
    bracket = ell * pow(omega, -1, modulus) % modulus
    num = _log_one_plus(bracket - 1, p, working)
    den = _log_one_plus(p, p, working)
    low = p ** (working - 1)
    s = (num // p) * pow(den // p, -1, low) % low
    return s % p**precision


def kappa(ell: int, ring: RingDescriptor) -> RingElement:
    """
    kappa(<ell>) = (1+T)^s where <ell> = ell / omega(ell) = (1+p)^s.

    Raises:
        BadInput: p divides ell.
        BadDomain: the ring is not a truncated Iwasawa algebra.
    """
    p = ring.p
    if ring.kind is not RingKind.TRUNC_IWASAWA:
        raise BadDomain(f"kappa lives on truncated Iwasawa algebras, not {ring}")
    if ell % p == 0:
        raise BadInput(f"kappa needs ell prime to p, got ell={ell}, p={p}")

    working = ring.a + _vp(factorial(ring.b - 1), p)
    s = exponent_s(ell, p, working)
    coeffs = [comb(s, k) % ring.modulus for k in range(ring.b)]
    logger.debug(f"kappa({ell}) over {ring}: s={s} mod {p}^{working}")
    return RingElement(ring, ring.normalize(coeffs))


def beta_substitute(f: RingElement) -> RingElement:
    """Evaluate f at (1+T)^-1 - 1; an involution on the truncation."""
    ring = f.ring
    if ring.kind is not RingKind.TRUNC_IWASAWA:
        raise BadDomain(f"beta substitution needs a truncated Iwasawa algebra, not {ring}")
    one_plus_t = RingElement(ring, ring.add(ring.one, ring.generator()))
    point = one_plus_t.inverse() - 1
    constants = [ring.scale(ring.one, c) for c in f.coeffs]
    return RingElement(ring, ring.evaluate(constants, point.coeffs))
