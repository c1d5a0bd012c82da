"""
Howell Lattices — canonical additive subgroups of (Z/N)^n.

Every sub-module of a free Z/N-module has a unique Howell basis: an echelon
form whose pivots divide N, whose entries above each pivot are reduced into
[0, pivot), and which satisfies the Howell property (any element whose first
k coordinates vanish is spanned by the rows whose pivots lie beyond column k).
With it membership is decidable by reduction and two generating sets of the
same subgroup produce identical bases.

Rows are plain ``tuple[int, ...]``; all arithmetic is on Python ints.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod

from sympy.core.intfunc import igcdex

logger = logging.getLogger(__name__)

Row = tuple[int, ...]


# ──────────────────────────────────────────────
# Canonical form
# ──────────────────────────────────────────────


def _unit_lift(residue: int, modulus: int, lift_step: int) -> int:
    """Lift ``residue`` (a unit mod ``lift_step``) to a unit mod ``modulus``."""
    v = residue % modulus
    while gcd(v, modulus) != 1:
        v = (v + lift_step) % modulus
    return v


def howell_rows(rows: Iterable[Sequence[int]], modulus: int, rank: int) -> tuple[Row, ...]:
    """
    Compute the Howell basis of the span of ``rows`` in (Z/modulus)^rank.

    Args:
        rows: Generators, each of length ``rank``.
        modulus: N > 1.
        rank: Ambient rank.

    Returns:
        The canonical basis, ordered by pivot column.
    """
    work = [[x % modulus for x in r] for r in rows]
    for r in work:
        if len(r) != rank:
            raise ValueError(f"row of length {len(r)} in rank-{rank} lattice")
    work = [r for r in work if any(r)]

    pivots: list[tuple[int, list[int]]] = []
    for col in range(rank):
        pivot: list[int] | None = None
        rest: list[list[int]] = []
        for r in work:
            if r[col] == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            a, b = pivot[col], r[col]
            s, t, g = igcdex(a, b)
            ag, bg = a // g, b // g
            new_pivot = [(s * x + t * y) % modulus for x, y in zip(pivot, r, strict=True)]
            new_rest = [(ag * y - bg * x) % modulus for x, y in zip(pivot, r, strict=True)]
            pivot = new_pivot
            if any(new_rest):
                rest.append(new_rest)
        if pivot is None:
            work = rest
            continue

        d = gcd(pivot[col], modulus)
        cofactor = modulus // d
        inv = pow(pivot[col] // d, -1, cofactor) if cofactor > 1 else 1
        unit = _unit_lift(inv, modulus, cofactor)
        pivot = [(unit * x) % modulus for x in pivot]

        # saturation: (N/d) * pivot vanishes in this column
        sat = [(cofactor * x) % modulus for x in pivot]
        if any(sat):
            rest.append(sat)
        pivots.append((col, pivot))
        work = [r for r in rest if any(r)]

    for i, (col, prow) in enumerate(pivots):
        d = prow[col]
        for j in range(i):
            upper = pivots[j][1]
            q = upper[col] // d
            if q:
                reduced = [(x - q * y) % modulus for x, y in zip(upper, prow, strict=True)]
                pivots[j] = (pivots[j][0], reduced)

    return tuple(tuple(r) for _, r in pivots)


def _pivot_col(row: Row) -> int:
    for i, x in enumerate(row):
        if x:
            return i
    raise ValueError("zero row has no pivot")


# ──────────────────────────────────────────────
# SubLattice
# ──────────────────────────────────────────────


@dataclass(frozen=True)
class SubLattice:
    """
    Additive subgroup of (Z/modulus)^ambient_rank held in Howell form.

    Construct through :meth:`span`; the raw constructor assumes ``basis`` is
    already canonical.
    """

    ambient_rank: int
    modulus: int
    basis: tuple[Row, ...] = ()

    @classmethod
    def span(cls, rows: Iterable[Sequence[int]], modulus: int, rank: int) -> SubLattice:
        return cls(rank, modulus, howell_rows(rows, modulus, rank))

    @classmethod
    def zero(cls, modulus: int, rank: int) -> SubLattice:
        return cls(rank, modulus, ())

    @classmethod
    def full(cls, modulus: int, rank: int) -> SubLattice:
        eye = [[int(i == j) for j in range(rank)] for i in range(rank)]
        return cls.span(eye, modulus, rank)

    @cached_property
    def _pivots(self) -> tuple[tuple[int, int], ...]:
        out = []
        for row in self.basis:
            c = _pivot_col(row)
            out.append((c, row[c]))
        return tuple(out)

    # ── membership ──

    def reduce(self, vector: Sequence[int]) -> Row:
        """Canonical representative of ``vector`` modulo this lattice."""
        n = self.modulus
        v = [x % n for x in vector]
        for (col, d), row in zip(self._pivots, self.basis, strict=True):
            q = v[col] // d
            if q:
                v = [(x - q * y) % n for x, y in zip(v, row, strict=True)]
        return tuple(v)

    def contains(self, vector: Sequence[int]) -> bool:
        return not any(self.reduce(vector))

    def __contains__(self, vector: object) -> bool:
        return isinstance(vector, Sequence) and self.contains(vector)  # type: ignore[arg-type]

    def subset(self, other: SubLattice) -> bool:
        """True when self ⊆ other."""
        return all(other.contains(r) for r in self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    # ── size and enumeration ──

    @property
    def orders(self) -> tuple[int, ...]:
        """Additive order of each basis row (N / pivot)."""
        return tuple(self.modulus // d for _, d in self._pivots)

    @property
    def size(self) -> int:
        return prod(self.orders)

    def elements(self) -> Iterator[Row]:
        """Every element exactly once, in a deterministic order."""
        n, r = self.modulus, self.ambient_rank
        for coeffs in itertools.product(*(range(o) for o in self.orders)):
            v = [0] * r
            for c, row in zip(coeffs, self.basis, strict=True):
                if c:
                    v = [(x + c * y) % n for x, y in zip(v, row, strict=True)]
            yield tuple(v)

    # ── lattice operations ──

    def join(self, other: SubLattice) -> SubLattice:
        self._check_compatible(other)
        return SubLattice.span(self.basis + other.basis, self.modulus, self.ambient_rank)

    def span_with(self, rows: Iterable[Sequence[int]]) -> SubLattice:
        """Lattice generated by self and ``rows``; rows already inside are skipped."""
        extra = [tuple(r) for r in rows if not self.contains(r)]
        if not extra:
            return self
        return SubLattice.span(list(self.basis) + extra, self.modulus, self.ambient_rank)

    def intersect(self, other: SubLattice) -> SubLattice:
        """Zassenhaus intersection: rows (v, v) for v in self, (w, 0) for w in other."""
        self._check_compatible(other)
        n, r = self.modulus, self.ambient_rank
        stacked = [tuple(v) + tuple(v) for v in self.basis]
        stacked += [tuple(w) + (0,) * r for w in other.basis]
        combined = howell_rows(stacked, n, 2 * r)
        rows = [row[r:] for row in combined if not any(row[:r])]
        return SubLattice.span(rows, n, r)

    def scale(self, factor: int) -> SubLattice:
        return SubLattice.span(
            [[factor * x for x in row] for row in self.basis], self.modulus, self.ambient_rank
        )

    def _check_compatible(self, other: SubLattice) -> None:
        if (self.modulus, self.ambient_rank) != (other.modulus, other.ambient_rank):
            raise ValueError(
                f"incompatible lattices: (Z/{self.modulus})^{self.ambient_rank} vs "
                f"(Z/{other.modulus})^{other.ambient_rank}"
            )

    def to_rows(self) -> list[list[int]]:
        """JSON-friendly basis."""
        return [list(r) for r in self.basis]


# ──────────────────────────────────────────────
# Linear congruences
# ──────────────────────────────────────────────


def kernel_lattice(
    rows: Sequence[Sequence[int]],
    relations: Sequence[Sequence[int]],
    modulus: int,
) -> SubLattice:
    """
    Coefficient vectors c with Σ c_i·rows_i ∈ span(relations).

    The result lives in (Z/modulus)^len(rows).
    """
    m = len(rows)
    if m == 0:
        return SubLattice.zero(modulus, 0)
    width = len(rows[0])
    aug = [tuple(r) + tuple(int(i == k) for k in range(m)) for i, r in enumerate(rows)]
    aug += [tuple(rel) + (0,) * m for rel in relations]
    combined = howell_rows(aug, modulus, width + m)
    kernel = [row[width:] for row in combined if not any(row[:width])]
    return SubLattice.span(kernel, modulus, m)


def solve_left(
    rows: Sequence[Sequence[int]],
    relations: Sequence[Sequence[int]],
    target: Sequence[int],
    modulus: int,
) -> Row | None:
    """
    Find c with Σ c_i·rows_i ≡ target modulo span(relations), or None.
    """
    m = len(rows)
    width = len(target)
    aug = [tuple(r) + tuple(int(i == k) for k in range(m)) for i, r in enumerate(rows)]
    aug += [tuple(rel) + (0,) * m for rel in relations]
    combined = howell_rows(aug, modulus, width + m)

    v = [x % modulus for x in target] + [0] * m
    for row in combined:
        col = _pivot_col(row)
        if col >= width:
            break
        q = v[col] // row[col]
        if q:
            v = [(x - q * y) % modulus for x, y in zip(v, row, strict=True)]
    if any(v[:width]):
        return None
    return tuple((-x) % modulus for x in v[width:])
