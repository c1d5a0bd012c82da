"""
Square matrices of any size over a finite ring, with intertwiner spaces.

Representations of finite groups in the obstruction code have dimension 1 or
2 but nothing here assumes it. Matrices are tuples of rows of coefficient
tuples.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from hida_fullness.errors import BadInput, NonUnit
from hida_fullness.lattices.howell import SubLattice, kernel_lattice
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor
from hida_fullness.rings.morphism import RingMorphism

MatN = tuple[tuple[Coeffs, ...], ...]


@dataclass(frozen=True)
class SquareMatrices:
    """M_n(ring)."""

    ring: RingDescriptor
    n: int

    @property
    def identity(self) -> MatN:
        return self.scalar(self.ring.one)

    def scalar(self, s: Coeffs) -> MatN:
        z = self.ring.zero
        return tuple(tuple(s if i == j else z for j in range(self.n)) for i in range(self.n))

    def of(self, rows: Sequence[Sequence[Coeffs]]) -> MatN:
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise BadInput(f"expected a {self.n}x{self.n} matrix")
        return tuple(tuple(self.ring.normalize(e) for e in row) for row in rows)

    def of_ints(self, rows: Sequence[Sequence[int]]) -> MatN:
        """Matrix with entries given as integers (images of Z in the ring)."""
        return tuple(tuple(self.ring.from_int(v) for v in row) for row in rows)

    def mul(self, x: MatN, y: MatN) -> MatN:
        r = self.ring
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                acc = r.zero
                for k in range(self.n):
                    acc = r.add(acc, r.mul(x[i][k], y[k][j]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def sub(self, x: MatN, y: MatN) -> MatN:
        return tuple(
            tuple(self.ring.sub(a, b) for a, b in zip(rx, ry, strict=True))
            for rx, ry in zip(x, y, strict=True)
        )

    def scale(self, s: Coeffs, x: MatN) -> MatN:
        return tuple(tuple(self.ring.mul(s, e) for e in row) for row in x)

    def det(self, x: MatN) -> Coeffs:
        """Leibniz expansion; n is tiny here."""
        r = self.ring
        total = r.zero
        for perm in itertools.permutations(range(self.n)):
            term = r.one
            for i, j in enumerate(perm):
                term = r.mul(term, x[i][j])
            inversions = sum(1 for a in range(self.n) for b in range(a) if perm[b] > perm[a])
            total = r.sub(total, term) if inversions % 2 else r.add(total, term)
        return total

    def minor(self, x: MatN, i: int, j: int) -> MatN:
        return tuple(
            tuple(e for c, e in enumerate(row) if c != j) for k, row in enumerate(x) if k != i
        )

    def inv(self, x: MatN) -> MatN:
        """Adjugate over det; raises NonUnit."""
        r = self.ring
        d = self.det(x)
        if not r.is_unit(d):
            raise NonUnit(f"matrix with determinant {r.format(d)} is not invertible")
        if self.n == 1:
            return ((r.inverse(x[0][0]),),)
        d_inv = r.inverse(d)
        smaller = SquareMatrices(r, self.n - 1)
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                cof = smaller.det(self.minor(x, j, i))
                if (i + j) % 2:
                    cof = r.neg(cof)
                row.append(r.mul(cof, d_inv))
            out.append(tuple(row))
        return tuple(out)

    def is_invertible(self, x: MatN) -> bool:
        return self.ring.is_unit(self.det(x))

    def is_scalar(self, x: MatN) -> bool:
        return x == self.scalar(x[0][0])

    def trace(self, x: MatN) -> Coeffs:
        acc = self.ring.zero
        for i in range(self.n):
            acc = self.ring.add(acc, x[i][i])
        return acc

    def apply(self, morphism: RingMorphism, x: MatN) -> MatN:
        """Entrywise image under a ring morphism (lands in M_n(target))."""
        return tuple(tuple(morphism.apply(e) for e in row) for row in x)

    # ── coordinates ──

    def flatten(self, x: MatN) -> tuple[int, ...]:
        return tuple(int(c) for row in x for e in row for c in e)

    def unflatten(self, coords: Sequence[int]) -> MatN:
        r = self.ring.rank
        entries = [self.ring.normalize(coords[k * r : (k + 1) * r]) for k in range(self.n * self.n)]
        return tuple(tuple(entries[i * self.n : (i + 1) * self.n]) for i in range(self.n))

    def basis(self) -> list[MatN]:
        """Z-module basis E_ij · e_k in flattened order."""
        width = self.n * self.n * self.ring.rank
        return [self.unflatten([int(t == k) for t in range(width)]) for k in range(width)]

    def elements(self) -> Iterator[MatN]:
        for values in itertools.product(list(self.ring.elements()), repeat=self.n * self.n):
            yield tuple(tuple(values[i * self.n : (i + 1) * self.n]) for i in range(self.n))

    def units(self) -> Iterator[MatN]:
        for x in self.elements():
            if self.is_invertible(x):
                yield x

    def format(self, x: MatN) -> str:
        return ";".join(",".join(self.ring.format(e) for e in row) for row in x)

    def to_json(self, x: MatN) -> list[list[str]]:
        return [[self.ring.format(e) for e in row] for row in x]

    # ── intertwiners ──

    def intertwiners(self, source: Sequence[MatN], target: Sequence[MatN]) -> SubLattice:
        """
        The lattice of C with C·source[i] = target[i]·C for every i, in flattened
        coordinates.
        """
        if not source:
            return SubLattice.full(self.ring.modulus, self.n * self.n * self.ring.rank)
        relation_rows = self._block_relations(len(source))
        rows = []
        for e in self.basis():
            row: list[int] = []
            for a, b in zip(source, target, strict=True):
                row.extend(self.flatten(self.sub(self.mul(e, a), self.mul(b, e))))
            rows.append(row)
        return kernel_lattice(rows, relation_rows, self.ring.modulus)

    def commutant(self, xs: Sequence[MatN]) -> SubLattice:
        return self.intertwiners(xs, xs)

    def _block_relations(self, blocks: int) -> list[tuple[int, ...]]:
        r = self.ring.rank
        width = self.n * self.n * r
        out = []
        for block in range(blocks * self.n * self.n):
            for rel in self.ring.relations():
                row = [0] * (blocks * width)
                row[block * r : (block + 1) * r] = rel
                out.append(tuple(row))
        return out

    def lattice_matrices(self, lattice: SubLattice) -> Iterator[MatN]:
        for v in lattice.elements():
            yield self.unflatten(v)

    def first_invertible(self, lattice: SubLattice) -> MatN | None:
        """First invertible element of a matrix lattice in enumeration order."""
        for x in self.lattice_matrices(lattice):
            if self.is_invertible(x):
                return x
        return None
