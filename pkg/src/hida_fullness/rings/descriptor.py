"""
Ring Descriptors — exact coefficient rings at finite scale.

A ``RingDescriptor`` names one ring and owns its arithmetic. Elements are raw
coefficient tuples in the ring's canonical basis:

    zmod_pa        Z/p^a                      basis 1
    trunc_iwasawa  (Z/p^a)[T]/(T^b)           basis 1, T, ..., T^(b-1)
    finite_field   F_q, q = p^f               basis 1, x, ..., x^(f-1) over Z/p
    monogenic_ext  base[x]/(g(x)), g monic    basis e_k * x^i, index i*rank(base) + k
    quotient       base / ideal               canonical Howell coset representatives
    cyc_rational   Q(zeta_n)                  basis 1, z, ..., z^(phi(n)-1), Fraction coefficients
    rational       Q                          basis 1, Fraction coefficient

Finite rings reduce every coefficient into [0, modulus). Multiplication goes
through structure constants computed once per ring.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

from sympy import (
    Poly,
    Rational,
    cyclotomic_poly,
    factorint,
    isprime,
    primitive_root,
    symbols,
    totient,
)
from sympy.polys.polyerrors import NotInvertible

from hida_fullness.errors import BadDomain, BadInput, NonUnit, Unsupported
from hida_fullness.lattices.howell import SubLattice, solve_left

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Coeffs = tuple[Scalar, ...]

DEFAULT_PRECISION_A = 2
DEFAULT_TRUNCATION_B = 3


class RingKind(Enum):
    """Supported coefficient ring families."""

    ZMOD_PA = "zmod_pa"
    TRUNC_IWASAWA = "trunc_iwasawa"
    FINITE_FIELD = "finite_field"
    MONOGENIC_EXT = "monogenic_ext"
    QUOTIENT = "quotient"
    CYC_RATIONAL = "cyc_rational"
    RATIONAL = "rational"


_VARIABLE = {
    RingKind.TRUNC_IWASAWA: "T",
    RingKind.FINITE_FIELD: "x",
    RingKind.MONOGENIC_EXT: "x",
    RingKind.CYC_RATIONAL: "z",
}


@dataclass(frozen=True)
class RingDescriptor:
    """
    An exact coefficient ring.

    Use the module-level factories (``zmod``, ``trunc_iwasawa``, ...) rather
    than the constructor; they validate parameters.
    """

    kind: RingKind
    p: int = 0
    a: int = 1
    b: int = 1
    q: int = 0
    n: int = 0
    base: RingDescriptor | None = None
    ext_poly: tuple[Coeffs, ...] = ()
    ideal_rows: tuple[tuple[int, ...], ...] = field(default=())

    # ── shape ─────────────────────────────────

    @property
    def is_finite(self) -> bool:
        return self.kind not in (RingKind.CYC_RATIONAL, RingKind.RATIONAL)

    @property
    def prime(self) -> int:
        if self.base is not None:
            return self.base.prime
        return self.p

    @cached_property
    def modulus(self) -> int:
        """Additive exponent of the ring (0 for characteristic-zero rings)."""
        match self.kind:
            case RingKind.ZMOD_PA | RingKind.TRUNC_IWASAWA:
                return self.p**self.a
            case RingKind.FINITE_FIELD:
                return self.p
            case RingKind.MONOGENIC_EXT | RingKind.QUOTIENT:
                assert self.base is not None
                return self.base.modulus
            case _:
                return 0

    @cached_property
    def rank(self) -> int:
        match self.kind:
            case RingKind.ZMOD_PA | RingKind.RATIONAL:
                return 1
            case RingKind.TRUNC_IWASAWA:
                return self.b
            case RingKind.FINITE_FIELD:
                return self.field_degree
            case RingKind.MONOGENIC_EXT:
                assert self.base is not None
                return self.base.rank * self.ext_degree
            case RingKind.QUOTIENT:
                assert self.base is not None
                return self.base.rank
            case RingKind.CYC_RATIONAL:
                return int(totient(self.n))
        raise Unsupported(f"unknown ring kind {self.kind}")

    @cached_property
    def field_degree(self) -> int:
        f, r = 0, self.q
        while r > 1:
            r //= self.p
            f += 1
        return f

    @property
    def ext_degree(self) -> int:
        return len(self.ext_poly) - 1

    @cached_property
    def exponent(self) -> int:
        """e with modulus = p^e."""
        e, r = 0, self.modulus
        while r > 1:
            r //= self.prime
            e += 1
        return e

    @cached_property
    def ideal_lattice(self) -> SubLattice:
        assert self.base is not None
        return SubLattice(self.base.rank, self.modulus, self.ideal_rows)

    @cached_property
    def size(self) -> int:
        if not self.is_finite:
            raise Unsupported(f"{self} is infinite")
        total = self.modulus**self.rank
        if self.kind is RingKind.QUOTIENT:
            total //= self.ideal_lattice.size
        return total

    def relations(self) -> tuple[tuple[int, ...], ...]:
        """Z/modulus-linear relations among basis coordinates (nonempty only for quotients)."""
        return self.ideal_rows if self.kind is RingKind.QUOTIENT else ()

    @property
    def variable(self) -> str | None:
        return _VARIABLE.get(self.kind)

    # ── canonical values ──────────────────────

    @cached_property
    def zero(self) -> Coeffs:
        return tuple(self._scalar(0) for _ in range(self.rank))

    @cached_property
    def one(self) -> Coeffs:
        if self.kind is RingKind.MONOGENIC_EXT:
            assert self.base is not None
            return self.base.one + (0,) * (self.rank - self.base.rank)
        if self.kind is RingKind.QUOTIENT:
            assert self.base is not None
            return self.normalize(self.base.one)
        return (self._scalar(1),) + self.zero[1:]

    def _scalar(self, value: Scalar) -> Scalar:
        return Fraction(value) if not self.is_finite else int(value)

    def basis_vector(self, index: int) -> Coeffs:
        v = list(self.zero)
        v[index] = self._scalar(1)
        return self.normalize(v)

    def normalize(self, coeffs: Sequence[Scalar]) -> Coeffs:
        """Fully reduced coefficient tuple."""
        if len(coeffs) != self.rank:
            raise BadInput(f"expected {self.rank} coefficients for {self}, got {len(coeffs)}")
        if not self.is_finite:
            return tuple(Fraction(c) for c in coeffs)
        n = self.modulus
        out = tuple(int(c) % n for c in coeffs)
        if self.kind is RingKind.QUOTIENT:
            return self.ideal_lattice.reduce(out)
        return out

    def from_int(self, k: int) -> Coeffs:
        return self.scale(self.one, k)

    def from_fraction(self, value: Fraction) -> Coeffs:
        """Image of a rational number; the denominator must be a unit."""
        value = Fraction(value)
        if not self.is_finite:
            return self.scale(self.one, value)
        num = self.from_int(value.numerator)
        return self.mul(num, self.inverse(self.from_int(value.denominator)))

    def generator(self) -> Coeffs:
        """The adjoined variable: T, x or zeta."""
        match self.kind:
            case RingKind.TRUNC_IWASAWA:
                return self.basis_vector(1) if self.b > 1 else self.zero
            case RingKind.FINITE_FIELD:
                return self.field_generator
            case RingKind.MONOGENIC_EXT:
                assert self.base is not None
                if self.ext_degree == 1:
                    return self.normalize(self.embed_base(self._neg_base(self.ext_poly[0])))
                return self.basis_vector(self.base.rank)
            case RingKind.CYC_RATIONAL:
                return self.cyclotomic_root
        raise BadDomain(f"{self} has no adjoined generator")

    def variable_T(self) -> Coeffs:
        """The Iwasawa variable T, looking through extensions and quotients."""
        if self.kind is RingKind.TRUNC_IWASAWA:
            return self.generator()
        if self.kind in (RingKind.MONOGENIC_EXT, RingKind.QUOTIENT) and self.base is not None:
            return self.embed_base(self.base.variable_T())
        raise BadDomain(f"{self} has no Iwasawa variable T")

    def embed_base(self, coeffs: Coeffs) -> Coeffs:
        """Image of a base-ring element (extensions and quotients)."""
        assert self.base is not None
        if self.kind is RingKind.MONOGENIC_EXT:
            return tuple(coeffs) + (0,) * (self.rank - self.base.rank)
        return self.normalize(coeffs)

    def _neg_base(self, coeffs: Coeffs) -> Coeffs:
        assert self.base is not None
        return self.base.neg(coeffs)

    # ── arithmetic ────────────────────────────

    def add(self, x: Coeffs, y: Coeffs) -> Coeffs:
        if not self.is_finite:
            return tuple(u + v for u, v in zip(x, y, strict=True))
        n = self.modulus
        out = tuple((u + v) % n for u, v in zip(x, y, strict=True))
        if self.kind is RingKind.QUOTIENT:
            return self.ideal_lattice.reduce(out)
        return out

    def neg(self, x: Coeffs) -> Coeffs:
        if not self.is_finite:
            return tuple(-u for u in x)
        return self.normalize([-u for u in x])

    def sub(self, x: Coeffs, y: Coeffs) -> Coeffs:
        return self.add(x, self.neg(y))

    def scale(self, x: Coeffs, k: Scalar) -> Coeffs:
        if not self.is_finite:
            return tuple(Fraction(k) * u for u in x)
        return self.normalize([int(k) * u for u in x])

    @cached_property
    def _structure(self) -> tuple[tuple[Coeffs, ...], ...]:
        r = self.rank
        table = []
        for i in range(r):
            row = []
            for j in range(r):
                row.append(self._basis_product(i, j))
            table.append(tuple(row))
        logger.debug(f"structure constants ready for {self} (rank {r})")
        return tuple(table)

    def mul(self, x: Coeffs, y: Coeffs) -> Coeffs:
        r = self.rank
        if r == 1:
            return self.normalize((x[0] * y[0],))
        table = self._structure
        acc: list[Scalar] = [0] * r
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, s in enumerate(row[j]):
                    if s:
                        acc[k] += c * s
        return self.normalize(acc)

    def power(self, x: Coeffs, e: int) -> Coeffs:
        if e < 0:
            return self.power(self.inverse(x), -e)
        result, base = self.one, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, x: Coeffs) -> bool:
        return not any(x)

    def inverse(self, x: Coeffs) -> Coeffs:
        """Multiplicative inverse; raises NonUnit."""
        if self.kind is RingKind.RATIONAL:
            if not x[0]:
                raise NonUnit("0 is not invertible")
            return (1 / Fraction(x[0]),)
        if self.kind is RingKind.CYC_RATIONAL:
            return _cyclotomic_inverse(self, tuple(x))
        result = _finite_inverse(self, tuple(x))
        if result is None:
            raise NonUnit(f"{self.format(x)} is not a unit in {self}")
        return result

    def is_unit(self, x: Coeffs) -> bool:
        try:
            self.inverse(x)
        except NonUnit:
            return False
        return True

    def frobenius(self, x: Coeffs, i: int = 1) -> Coeffs:
        """x -> x^(p^i) on a finite field."""
        if self.kind is not RingKind.FINITE_FIELD:
            raise BadDomain(f"Frobenius is only an automorphism of finite fields, not {self}")
        return self.power(x, self.p ** (i % self.field_degree))

    def is_nilpotent(self, x: Coeffs) -> bool:
        if not self.is_finite:
            return self.is_zero(x)
        return self.is_zero(self.power(x, self.rank * self.exponent))

    def in_maximal_ideal(self, x: Coeffs) -> bool:
        """Membership in the maximal ideal of a local finite ring (= nilpotent)."""
        return self.is_nilpotent(x)

    def elements(self) -> Iterator[Coeffs]:
        """Every element once, deterministic order (finite rings only)."""
        if not self.is_finite:
            raise Unsupported(f"cannot enumerate {self}")
        n = self.modulus
        if self.kind is RingKind.QUOTIENT:
            bounds = [n] * self.rank
            for row in self.ideal_rows:
                col = next(i for i, v in enumerate(row) if v)
                bounds[col] = row[col]
            yield from itertools.product(*(range(m) for m in bounds))
            return
        yield from itertools.product(range(n), repeat=self.rank)

    def units(self) -> Iterator[Coeffs]:
        for x in self.elements():
            if self.is_unit(x):
                yield x

    def evaluate(self, coeffs: Sequence[Coeffs], point: Coeffs) -> Coeffs:
        """Horner evaluation of Σ coeffs[i]·point^i (coefficients already in this ring)."""
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, point), c)
        return acc

    # ── per-kind multiplication ───────────────

    def _basis_product(self, i: int, j: int) -> Coeffs:
        r = self.rank
        match self.kind:
            case RingKind.ZMOD_PA | RingKind.RATIONAL:
                return (self._scalar(1),)
            case RingKind.TRUNC_IWASAWA:
                out = [0] * r
                if i + j < r:
                    out[i + j] = 1
                return tuple(out)
            case RingKind.FINITE_FIELD:
                return _reduce_mod_monic([0] * (i + j) + [1], self.field_poly, r, self.p)
            case RingKind.CYC_RATIONAL:
                raw: list[Scalar] = [Fraction(0)] * (i + j) + [Fraction(1)]
                reduced = _reduce_mod_monic(raw, self.cyclotomic_poly, r, 0)
                return tuple(Fraction(c) for c in reduced)
            case RingKind.MONOGENIC_EXT:
                return self._monogenic_basis_product(i, j)
            case RingKind.QUOTIENT:
                assert self.base is not None
                return self.base._structure[i][j]
        raise Unsupported(f"no multiplication for {self.kind}")

    def _monogenic_basis_product(self, i: int, j: int) -> Coeffs:
        base = self.base
        assert base is not None
        br, d = base.rank, self.ext_degree
        xi, ki = divmod(i, br)
        xj, kj = divmod(j, br)
        prod_base = base.mul(base.basis_vector(ki), base.basis_vector(kj))
        poly: list[Coeffs] = [base.zero] * (xi + xj + 1)
        poly[xi + xj] = prod_base
        for m in range(len(poly) - 1, d - 1, -1):
            lead = poly[m]
            if base.is_zero(lead):
                continue
            poly[m] = base.zero
            for t in range(d):
                poly[m - d + t] = base.sub(poly[m - d + t], base.mul(lead, self.ext_poly[t]))
        poly += [base.zero] * (d - len(poly))
        flat: list[int] = []
        for c in poly[:d]:
            flat.extend(int(v) for v in c)
        return tuple(flat)

    # ── finite field / cyclotomic data ─────────

    @cached_property
    def field_poly(self) -> tuple[int, ...]:
        """Monic primitive polynomial defining F_q over F_p (low degree first)."""
        return _primitive_polynomial(self.p, self.field_degree)

    @cached_property
    def field_generator(self) -> Coeffs:
        if self.field_degree == 1:
            return (int(primitive_root(self.p)),)
        return self.basis_vector(1)

    @cached_property
    def cyclotomic_poly(self) -> tuple[int, ...]:
        z = symbols("z")
        coeffs = Poly(cyclotomic_poly(self.n, z), z).all_coeffs()
        return tuple(int(c) for c in reversed(coeffs))

    @cached_property
    def cyclotomic_root(self) -> Coeffs:
        if self.rank == 1:
            # Q(zeta_1) = Q(zeta_2) = Q
            return (Fraction(1 if self.n == 1 else -1),)
        return self.basis_vector(1)

    # ── display ───────────────────────────────

    def format(self, x: Coeffs) -> str:
        """Polynomial string such as ``2+1*T+2*T^2``."""
        if self.kind is RingKind.MONOGENIC_EXT:
            return self._format_monogenic(x)
        var = self.variable
        terms = []
        for i, c in enumerate(x):
            if not c:
                continue
            if i == 0 or var is None:
                terms.append(f"{c}")
            else:
                mono = var if i == 1 else f"{var}^{i}"
                coeff = f"({c})" if isinstance(c, Fraction) and c.denominator != 1 else f"{c}"
                terms.append(f"{coeff}*{mono}")
        return "+".join(terms) if terms else "0"

    def _format_monogenic(self, x: Coeffs) -> str:
        base = self.base
        assert base is not None
        br = base.rank
        terms = []
        for i in range(self.ext_degree):
            c = tuple(x[i * br : (i + 1) * br])
            if base.is_zero(c):
                continue
            text = base.format(c)
            if i == 0:
                terms.append(text)
                continue
            mono = "x" if i == 1 else f"x^{i}"
            wrapped = f"({text})" if "+" in text else text
            terms.append(f"{wrapped}*{mono}")
        return "+".join(terms) if terms else "0"

    def __str__(self) -> str:
        match self.kind:
            case RingKind.ZMOD_PA:
                return f"Z/{self.modulus}"
            case RingKind.TRUNC_IWASAWA:
                return f"(Z/{self.modulus})[T]/(T^{self.b})"
            case RingKind.FINITE_FIELD:
                return f"F_{self.q}"
            case RingKind.MONOGENIC_EXT:
                return f"{self.base}[x]/({self._format_ext_poly()})"
            case RingKind.QUOTIENT:
                return f"{self.base}/<{list(map(list, self.ideal_rows))}>"
            case RingKind.CYC_RATIONAL:
                return f"Q(zeta_{self.n})"
            case _:
                return "Q"

    def _format_ext_poly(self) -> str:
        assert self.base is not None
        terms = []
        for i, c in reversed(list(enumerate(self.ext_poly))):
            if self.base.is_zero(c):
                continue
            text = self.base.format(c)
            if i == 0:
                terms.append(text)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == self.base.one else f"({text})*{mono}")
        return "+".join(terms)


# ──────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────


def _reduce_mod_monic(
    coeffs: Sequence[Scalar], modulus_poly: Sequence[int], degree: int, p: int
) -> tuple[Scalar, ...]:
    """Reduce a polynomial (low degree first) modulo a monic polynomial; mod p when p > 0."""
    work = list(coeffs)
    for m in range(len(work) - 1, degree - 1, -1):
        lead = work[m]
        if not lead:
            continue
        work[m] = 0
        for t in range(degree):
            work[m - degree + t] -= lead * modulus_poly[t]
    work += [0] * (degree - len(work))
    out = work[:degree]
    if p:
        return tuple(int(c) % p for c in out)
    return tuple(out)


def _poly_mulmod(x: list[int], y: list[int], g: Sequence[int], p: int) -> list[int]:
    d = len(g) - 1
    raw = [0] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                raw[i + j] += a * b
    return list(_reduce_mod_monic(raw, g, d, p))  # type: ignore[arg-type]


def _poly_powmod(x: list[int], e: int, g: Sequence[int], p: int) -> list[int]:
    d = len(g) - 1
    result = [1] + [0] * (d - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, x, g, p)
        x = _poly_mulmod(x, x, g, p)
        e >>= 1
    return result


def _primitive_polynomial(p: int, f: int) -> tuple[int, ...]:
    if f == 1:
        return (0, 1)
    order = p**f - 1
    one = [1] + [0] * (f - 1)
    x = [0, 1] + [0] * (f - 2)
    prime_factors = list(factorint(order))
    for tail in itertools.product(range(p), repeat=f):
        if tail[0] == 0:
            continue
        g = tuple(tail) + (1,)
        if _poly_powmod(x, order, g, p) != one:
            continue
        if all(_poly_powmod(x, order // r, g, p) != one for r in prime_factors):
            logger.debug(f"F_{p**f} defined by {g}")
            return g
    raise BadInput(f"no primitive polynomial of degree {f} over F_{p}")


@lru_cache(maxsize=65536)
def _finite_inverse(ring: RingDescriptor, x: Coeffs) -> Coeffs | None:
    rows = [ring.mul(x, ring.basis_vector(j)) for j in range(ring.rank)]
    coeffs = solve_left(rows, ring.relations(), ring.one, ring.modulus)
    if coeffs is None:
        return None
    return ring.normalize(coeffs)


@lru_cache(maxsize=4096)
def _cyclotomic_inverse(ring: RingDescriptor, x: Coeffs) -> Coeffs:
    z = symbols("z")
    if not any(x):
        raise NonUnit("0 is not invertible")
    element = Poly(
        list(reversed([Rational(c.numerator, c.denominator) for c in map(Fraction, x)])),
        z,
        domain="QQ",
    )
    modulus_poly = Poly(list(reversed(ring.cyclotomic_poly)), z, domain="QQ")
    try:
        inv = element.invert(modulus_poly)
    except NotInvertible as exc:
        raise NonUnit(f"{ring.format(x)} is not invertible in {ring}") from exc
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
    coeffs += [Fraction(0)] * (ring.rank - len(coeffs))
    return tuple(coeffs[: ring.rank])


# ──────────────────────────────────────────────
# Factories
# ──────────────────────────────────────────────


def _require_odd_prime(p: int) -> None:
    if p <= 2 or not isprime(p):
        raise BadInput(f"p must be an odd prime, got {p}")


def zmod(p: int, a: int = DEFAULT_PRECISION_A) -> RingDescriptor:
    _require_odd_prime(p)
    if a < 1:
        raise BadInput(f"precision a must be >= 1, got {a}")
    return RingDescriptor(RingKind.ZMOD_PA, p=p, a=a)


def trunc_iwasawa(
    p: int, a: int = DEFAULT_PRECISION_A, b: int = DEFAULT_TRUNCATION_B
) -> RingDescriptor:
    """(Z/p^a)[T]/(T^b)."""
    _require_odd_prime(p)
    if a < 1 or b < 1:
        raise BadInput(f"truncation parameters must be >= 1, got a={a}, b={b}")
    return RingDescriptor(RingKind.TRUNC_IWASAWA, p=p, a=a, b=b)


def finite_field(q: int) -> RingDescriptor:
    factors = factorint(q)
    if len(factors) != 1:
        raise BadInput(f"field size must be a prime power, got {q}")
    (p,) = factors
    _require_odd_prime(int(p))
    return RingDescriptor(RingKind.FINITE_FIELD, p=int(p), q=q)


def monogenic_ext(base: RingDescriptor, ext_poly: Sequence[Sequence[int]]) -> RingDescriptor:
    """
    base[x]/(g) for monic g given low degree first as base-ring coefficient tuples.
    """
    if not base.is_finite or base.kind is RingKind.QUOTIENT:
        raise Unsupported(f"monogenic extensions need a free finite base, got {base}")
    coeffs = tuple(base.normalize(c) for c in ext_poly)
    if len(coeffs) < 2:
        raise BadInput("extension polynomial must have degree >= 1")
    if coeffs[-1] != base.one:
        raise BadInput("extension polynomial must be monic")
    return RingDescriptor(RingKind.MONOGENIC_EXT, base=base, ext_poly=coeffs)


def quotient(base: RingDescriptor, ideal: SubLattice) -> RingDescriptor:
    """base / ideal, where ``ideal`` is an ideal lattice in base coordinates."""
    if base.kind is RingKind.QUOTIENT:
        assert base.base is not None
        return quotient(base.base, ideal.join(base.ideal_lattice))
    return RingDescriptor(RingKind.QUOTIENT, base=base, ideal_rows=ideal.basis)


def cyc_rational(n: int) -> RingDescriptor:
    if n < 1:
        raise BadInput(f"cyclotomic conductor must be positive, got {n}")
    return RingDescriptor(RingKind.CYC_RATIONAL, n=n)


def rational() -> RingDescriptor:
    return RingDescriptor(RingKind.RATIONAL)
