"""
Eta products q^(Σde/24) ∏_d ∏_n (1 - q^(dn))^e as exact integer q-expansions.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction
from math import isqrt, lcm

from hida_fullness.errors import BadInput, NonIntegralWeightOffset, Unsupported
from hida_fullness.forms.qexpansion import MAX_PRECISION, QExpansion
from hida_fullness.rings.descriptor import rational

logger = logging.getLogger(__name__)

Series = list[int]


def euler_product(length: int) -> Series:
    """∏(1 - qⁿ) to O(q^length) by the pentagonal number theorem."""
    out = [0] * length
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            e = j * (3 * j - 1) // 2
            if e < length:
                out[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            return out
        k += 1


def _mul(x: Series, y: Series, length: int) -> Series:
    out = [0] * length
    for i, a in enumerate(x):
        if not a:
            continue
        for j in range(min(len(y), length - i)):
            out[i + j] += a * y[j]
    return out


def _power(x: Series, e: int, length: int) -> Series:
    result = [1] + [0] * (length - 1)
    while e:
        if e & 1:
            result = _mul(result, x, length)
        x = _mul(x, x, length)
        e >>= 1
    return result


def _inverse(x: Series, length: int) -> Series:
    """1/x for a series with constant term 1."""
    out = [0] * length
    out[0] = 1
    for n in range(1, length):
        out[n] = -sum(x[k] * out[n - k] for k in range(1, min(n, len(x) - 1) + 1))
    return out


def _dilate(x: Series, d: int, length: int) -> Series:
    out = [0] * length
    for i, a in enumerate(x):
        if i * d >= length:
            break
        out[i * d] = a
    return out


def eta_level(factors: Sequence[tuple[int, int]]) -> int:
    """Least multiple N of lcm(d) with N·Σ e/d ≡ 0 mod 24."""
    base = lcm(*(d for d, _ in factors))
    weight = sum((Fraction(e, d) for d, e in factors), Fraction(0))
    n = base
    while (n * weight) % 24:
        n += base
    return n


def eta_product_expand(factors: Sequence[tuple[int, int]], precision: int) -> QExpansion:
    """
    Raises:
        NonIntegralWeightOffset: Σ d·e / 24 is not a positive integer.
        Unsupported: odd total exponent, or a nontrivial quadratic character.
    """
    if not 1 <= precision <= MAX_PRECISION:
        raise BadInput(f"precision must lie in [1, {MAX_PRECISION}], got {precision}")
    total = sum(d * e for d, e in factors)
    if not factors or total <= 0 or total % 24:
        raise NonIntegralWeightOffset(f"Σ d·e = {total} is not a positive multiple of 24")
    exponent = sum(e for _, e in factors)
    if exponent % 2:
        raise Unsupported("half-integral weight eta products are not supported")
    weight = exponent // 2
    discriminant = (-1) ** weight
    for d, e in factors:
        discriminant *= d ** abs(e)
    if discriminant < 0 or isqrt(discriminant) ** 2 != discriminant:
        raise Unsupported("eta products with a nontrivial quadratic character are not supported")

    offset = total // 24
    length = max(precision - offset + 1, 1)
    euler = euler_product(length)
    series = [1] + [0] * (length - 1)
    for d, e in factors:
        term = _dilate(euler, d, length)
        if e < 0:
            term, e = _inverse(term, length), -e
        series = _mul(series, _power(term, e, length), length)

    values = [series[n - offset] if n >= offset else 0 for n in range(1, precision + 1)]
    label = "eta[" + ",".join(f"{d}^{e}" for d, e in factors) + "]"
    level = eta_level(factors)
    logger.debug(f"{label}: weight {weight}, level {level}, precision {precision}")
    return QExpansion.from_values(rational(), values, level, weight, label=label)
