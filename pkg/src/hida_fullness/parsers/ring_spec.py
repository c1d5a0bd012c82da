"""
Ring Specification Parser.

Reads line-oriented ``key=value`` ring descriptions and polynomial-string
elements such as ``2+1*T+2*T^2``:

    # (Z/9)[T]/(T^2)
    kind=trunc_iwasawa
    p=3
    a=2
    b=2

Monogenic extensions and quotients name their base with ``base=<kind>``
and share the numeric keys: ``ext_poly=x^2+T`` or ``ideal=T^2, 3``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from sympy import Expr, Poly, Rational, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from hida_fullness.errors import BadInput, NonUnit
from hida_fullness.lattices.ideals import ideal_closure
from hida_fullness.rings.descriptor import (
    Coeffs,
    RingDescriptor,
    RingKind,
    cyc_rational,
    finite_field,
    monogenic_ext,
    quotient,
    rational,
    trunc_iwasawa,
    zmod,
)

_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication)
_INT_KEYS = ("p", "a", "b", "q", "n")


def _symbols(ring: RingDescriptor) -> list[tuple[str, Coeffs]]:
    """Variable names usable in element strings, with their values in ``ring``."""
    match ring.kind:
        case RingKind.TRUNC_IWASAWA | RingKind.CYC_RATIONAL:
            return [(ring.variable or "", ring.generator())]
        case RingKind.FINITE_FIELD if ring.field_degree > 1:
            return [("x", ring.generator())]
        case RingKind.MONOGENIC_EXT:
            assert ring.base is not None
            inner = [(name, ring.embed_base(v)) for name, v in _symbols(ring.base)]
            return inner + [("x", ring.generator())]
        case RingKind.QUOTIENT:
            assert ring.base is not None
            return [(name, ring.embed_base(v)) for name, v in _symbols(ring.base)]
    return []


def parse_element(text: str, ring: RingDescriptor) -> Coeffs:
    """
    Parse a polynomial string into ``ring``.

    Raises:
        BadInput: the text is not a polynomial in the ring's variables, or a
            denominator is not invertible.
    """
    names = _symbols(ring)
    local = {name: Symbol(name) for name, _ in names}
    try:
        expr = parse_expr(text.strip(), local_dict=local, transformations=_TRANSFORMS)
    except (SyntaxError, TypeError, ValueError) as e:
        raise BadInput(f"cannot parse element {text!r}: {e}") from None

    stray = {str(s) for s in expr.free_symbols} - set(local)
    if stray:
        raise BadInput(f"unknown variables {sorted(stray)} in {text!r} for {ring}")
    try:
        return _evaluate(expr, names, local, ring)
    except NonUnit:
        raise BadInput(f"{text!r} has a denominator that is not a unit in {ring}") from None


def _evaluate(
    expr: Expr, names: list[tuple[str, Coeffs]], local: dict[str, Symbol], ring: RingDescriptor
) -> Coeffs:
    if not names:
        value = Rational(expr)
        return ring.from_fraction(Fraction(int(value.p), int(value.q)))

    poly = Poly(expr, *[local[name] for name, _ in names], domain="QQ")
    total = ring.zero
    for monomial, coeff in poly.terms():
        term = ring.from_fraction(Fraction(int(coeff.p), int(coeff.q)))
        for (_, value), exponent in zip(names, monomial, strict=True):
            term = ring.mul(term, ring.power(value, exponent))
        total = ring.add(total, term)
    return total


def _parse_pairs(content: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for raw in re.split(r"[\n;]", content):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for chunk in re.split(r",(?=\s*[a-z_]+\s*=)", line):
            if "=" not in chunk:
                raise BadInput(f"expected key=value, got {chunk!r}")
            key, value = chunk.split("=", 1)
            pairs[key.strip().lower()] = value.strip()
    return pairs


def _ints(pairs: dict[str, str]) -> dict[str, int]:
    out = {}
    for key in _INT_KEYS:
        if key in pairs:
            try:
                out[key] = int(pairs[key])
            except ValueError:
                raise BadInput(f"{key} must be an integer, got {pairs[key]!r}") from None
    return out


def _simple_ring(kind: str, nums: dict[str, int]) -> RingDescriptor:
    def need(key: str) -> int:
        if key not in nums:
            raise BadInput(f"ring kind {kind!r} needs {key}=")
        return nums[key]

    match kind:
        case "zmod" | "zmod_pa":
            return zmod(need("p"), nums.get("a", 1))
        case "trunc_iwasawa":
            return trunc_iwasawa(need("p"), nums.get("a", 1), nums.get("b", 1))
        case "finite_field":
            return finite_field(nums.get("q") or need("p"))
        case "cyc_rational":
            return cyc_rational(need("n"))
        case "rational":
            return rational()
    raise BadInput(f"unknown ring kind {kind!r}")


def _ext_poly(text: str, base: RingDescriptor) -> list[Coeffs]:
    x = Symbol("x")
    local = {name: Symbol(name) for name, _ in _symbols(base)}
    local["x"] = x
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    except (SyntaxError, TypeError, ValueError) as e:
        raise BadInput(f"cannot parse ext_poly {text!r}: {e}") from None
    poly = Poly(expr, x)
    return [parse_element(str(c), base) for c in reversed(poly.all_coeffs())]


def parse_ring_spec(content: str) -> RingDescriptor:
    """
    Parse a ring specification.

    Raises:
        BadInput: a missing or malformed key, or an unknown kind.
    """
    pairs = _parse_pairs(content)
    if "kind" not in pairs:
        raise BadInput("ring specification needs kind=")
    nums = _ints(pairs)
    kind = pairs["kind"].lower()

    match kind:
        case "monogenic_ext":
            base = _simple_ring(pairs.get("base", "zmod"), nums)
            if "ext_poly" not in pairs:
                raise BadInput("monogenic_ext needs ext_poly=")
            return monogenic_ext(base, _ext_poly(pairs["ext_poly"], base))
        case "quotient":
            base = _simple_ring(pairs.get("base", "trunc_iwasawa"), nums)
            if "ideal" not in pairs:
                raise BadInput("quotient needs ideal=")
            gens = [parse_element(g, base) for g in pairs["ideal"].split(",") if g.strip()]
            return quotient(base, ideal_closure(gens, base).lattice)
    return _simple_ring(kind, nums)
