"""
Ring Elements — operator-friendly wrapper around raw coefficient tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from hida_fullness.errors import RingMismatch
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor


@dataclass(frozen=True)
class RingElement:
    """An element of ``ring``; ``coeffs`` is always fully reduced."""

    ring: RingDescriptor
    coeffs: Coeffs

    @classmethod
    def of(cls, ring: RingDescriptor, value: int | Fraction | Coeffs) -> RingElement:
        if isinstance(value, int):
            return cls(ring, ring.from_int(value))
        if isinstance(value, Fraction):
            return cls(ring, ring.from_fraction(value))
        return cls(ring, ring.normalize(value))

    @classmethod
    def generator_of(cls, ring: RingDescriptor) -> RingElement:
        return cls(ring, ring.generator())

    def _coerce(self, other: object) -> Coeffs:
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"cannot combine elements of {self.ring} and {other.ring}")
            return other.coeffs
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction):
            return self.ring.from_fraction(other)
        raise TypeError(f"cannot combine RingElement with {type(other).__name__}")

    def __add__(self, other: object) -> RingElement:
        return RingElement(self.ring, self.ring.add(self.coeffs, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other: object) -> RingElement:
        return RingElement(self.ring, self.ring.sub(self.coeffs, self._coerce(other)))

    def __rsub__(self, other: object) -> RingElement:
        return RingElement(self.ring, self.ring.sub(self._coerce(other), self.coeffs))

    def __mul__(self, other: object) -> RingElement:
        return RingElement(self.ring, self.ring.mul(self.coeffs, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self) -> RingElement:
        return RingElement(self.ring, self.ring.neg(self.coeffs))

    def __pow__(self, e: int) -> RingElement:
        return RingElement(self.ring, self.ring.power(self.coeffs, e))

    def __truediv__(self, other: object) -> RingElement:
        return self * RingElement(self.ring, self._coerce(other)).inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RingElement):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, int | Fraction):
            return self.coeffs == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def inverse(self) -> RingElement:
        return RingElement(self.ring, self.ring.inverse(self.coeffs))

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.coeffs)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.coeffs)

    def is_nilpotent(self) -> bool:
        return self.ring.is_nilpotent(self.coeffs)

    def __str__(self) -> str:
        return self.ring.format(self.coeffs)

    def __repr__(self) -> str:
        return f"RingElement({self.ring}, {self})"
