"""
2×2 matrices over a finite coefficient ring.

A matrix is a tuple ``(a, b, c, d)`` of coefficient tuples for
[[a, b], [c, d]]. Flattening concatenates the four coefficient tuples, which
is the coordinate system of every matrix lattice in the package.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from hida_fullness.errors import BadInput, NonUnit
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor

Matrix = tuple[Coeffs, Coeffs, Coeffs, Coeffs]


@dataclass(frozen=True)
class MatrixAlgebra:
    """M_2(ring)."""

    ring: RingDescriptor

    @property
    def identity(self) -> Matrix:
        r = self.ring
        return (r.one, r.zero, r.zero, r.one)

    @property
    def zero(self) -> Matrix:
        z = self.ring.zero
        return (z, z, z, z)

    def matrix(self, a: Coeffs, b: Coeffs, c: Coeffs, d: Coeffs) -> Matrix:
        n = self.ring.normalize
        return (n(a), n(b), n(c), n(d))

    def scalar(self, s: Coeffs) -> Matrix:
        z = self.ring.zero
        return (s, z, z, s)

    def diag(self, u: Coeffs, v: Coeffs) -> Matrix:
        z = self.ring.zero
        return (u, z, z, v)

    def e12(self, g: Coeffs) -> Matrix:
        r = self.ring
        return (r.one, g, r.zero, r.one)

    def e21(self, g: Coeffs) -> Matrix:
        r = self.ring
        return (r.one, r.zero, g, r.one)

    # ── arithmetic ──

    def mul(self, x: Matrix, y: Matrix) -> Matrix:
        r = self.ring
        a, b, c, d = x
        e, f, g, h = y
        return (
            r.add(r.mul(a, e), r.mul(b, g)),
            r.add(r.mul(a, f), r.mul(b, h)),
            r.add(r.mul(c, e), r.mul(d, g)),
            r.add(r.mul(c, f), r.mul(d, h)),
        )

    def add(self, x: Matrix, y: Matrix) -> Matrix:
        r = self.ring
        return (r.add(x[0], y[0]), r.add(x[1], y[1]), r.add(x[2], y[2]), r.add(x[3], y[3]))

    def sub(self, x: Matrix, y: Matrix) -> Matrix:
        r = self.ring
        return (r.sub(x[0], y[0]), r.sub(x[1], y[1]), r.sub(x[2], y[2]), r.sub(x[3], y[3]))

    def scale(self, s: Coeffs, x: Matrix) -> Matrix:
        r = self.ring
        return (r.mul(s, x[0]), r.mul(s, x[1]), r.mul(s, x[2]), r.mul(s, x[3]))

    def det(self, x: Matrix) -> Coeffs:
        r = self.ring
        return r.sub(r.mul(x[0], x[3]), r.mul(x[1], x[2]))

    def tr(self, x: Matrix) -> Coeffs:
        return self.ring.add(x[0], x[3])

    def adjugate(self, x: Matrix) -> Matrix:
        r = self.ring
        return (x[3], r.neg(x[1]), r.neg(x[2]), x[0])

    def inv_sl(self, x: Matrix) -> Matrix:
        """Inverse of a determinant-one matrix."""
        return self.adjugate(x)

    def inv(self, x: Matrix) -> Matrix:
        d = self.det(x)
        try:
            dinv = self.ring.inverse(d)
        except NonUnit as exc:
            raise NonUnit(f"matrix {self.format(x)} is not invertible") from exc
        return self.scale(dinv, self.adjugate(x))

    def power(self, x: Matrix, e: int) -> Matrix:
        if e < 0:
            return self.power(self.inv(x), -e)
        result, base = self.identity, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def conj(self, g: Matrix, x: Matrix) -> Matrix:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def commutator(self, x: Matrix, y: Matrix) -> Matrix:
        """Group commutator x y x^-1 y^-1."""
        return self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))

    def bracket(self, x: Matrix, y: Matrix) -> Matrix:
        """Lie bracket xy - yx."""
        return self.sub(self.mul(x, y), self.mul(y, x))

    # ── predicates ──

    def is_identity_mod_m(self, x: Matrix) -> bool:
        """x ≡ 1 modulo the maximal ideal (entries of x - 1 nilpotent)."""
        r = self.ring
        return all(r.is_nilpotent(e) for e in self.sub(x, self.identity))

    def is_upper_triangular(self, x: Matrix) -> bool:
        return self.ring.is_zero(x[2])

    def is_diagonal(self, x: Matrix) -> bool:
        return self.ring.is_zero(x[1]) and self.ring.is_zero(x[2])

    # ── coordinates ──

    def flatten(self, x: Matrix) -> tuple[int, ...]:
        return tuple(int(c) for entry in x for c in entry)

    def unflatten(self, row: Sequence[int]) -> Matrix:
        r = self.ring.rank
        if len(row) != 4 * r:
            raise BadInput(f"flattened matrix needs {4 * r} coordinates, got {len(row)}")
        n = self.ring.normalize
        return (n(row[0:r]), n(row[r : 2 * r]), n(row[2 * r : 3 * r]), n(row[3 * r :]))

    def format(self, x: Matrix) -> str:
        f = self.ring.format
        return f"{f(x[0])},{f(x[1])};{f(x[2])},{f(x[3])}"

    def to_json(self, x: Matrix) -> list[list[str]]:
        f = self.ring.format
        return [[f(x[0]), f(x[1])], [f(x[2]), f(x[3])]]
