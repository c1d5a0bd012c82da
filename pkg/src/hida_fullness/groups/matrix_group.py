"""
Matrix Groups — subgroups of GL_2 over finite rings.

A ``MatrixGroup`` is held as generators plus, once enumerated, the full
element list. Groups that are too large to enumerate (SL_2(A) itself) carry a
membership predicate instead.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

from hida_fullness.errors import BadInput, CapExceeded
from hida_fullness.groups.closure import closure
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.rings.descriptor import RingDescriptor

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 2_000_000


@dataclass
class MatrixGroup:
    ring: RingDescriptor
    generators: tuple[Matrix, ...]
    label: str = ""
    membership: Callable[[Matrix], bool] | None = None
    _elements: tuple[Matrix, ...] | None = field(default=None, repr=False)
    _element_set: frozenset[Matrix] | None = field(default=None, repr=False)

    @property
    def algebra(self) -> MatrixAlgebra:
        return MatrixAlgebra(self.ring)

    @classmethod
    def from_elements(
        cls, ring: RingDescriptor, elements: Sequence[Matrix], label: str = ""
    ) -> MatrixGroup:
        """A group whose element list is already known (it must be closed)."""
        group = cls(ring, tuple(elements), label=label)
        group._elements = tuple(elements)
        group._element_set = frozenset(elements)
        return group

    # ── enumeration ──

    @property
    def is_enumerated(self) -> bool:
        return self._elements is not None

    def enumerate(self, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[Matrix, ...]:
        if self._elements is None:
            alg = self.algebra
            try:
                elements = closure(self.generators, alg.mul, alg.identity, cap, alg.inv)
            except CapExceeded as exc:
                exc.stage = exc.stage or "enumerate_subgroup"
                raise
            self._elements = tuple(elements)
            self._element_set = frozenset(elements)
            logger.debug(f"enumerated {self.label or 'group'}: order {len(elements)}")
        return self._elements

    @property
    def elements(self) -> tuple[Matrix, ...]:
        return self.enumerate()

    @property
    def element_set(self) -> frozenset[Matrix]:
        self.enumerate()
        assert self._element_set is not None
        return self._element_set

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, x: Matrix) -> bool:
        if self._element_set is not None:
            return x in self._element_set
        if self.membership is not None:
            return self.membership(x)
        return x in self.element_set

    def contains_all(self, xs: Iterable[Matrix]) -> bool:
        return all(self.contains(x) for x in xs)

    def is_subgroup_of(self, other: MatrixGroup) -> bool:
        return other.contains_all(self.generators)

    def same_elements(self, other: MatrixGroup) -> bool:
        return self.element_set == other.element_set

    # ── properties ──

    def is_pgroup(self) -> bool:
        """Every element ≡ 1 mod m; checking generators suffices since Γ(m) is a group."""
        alg = self.algebra
        gens = self._elements if self._elements is not None else self.generators
        return all(alg.is_identity_mod_m(g) for g in gens)

    def is_sl2(self) -> bool:
        alg = self.algebra
        return all(alg.det(g) == self.ring.one for g in self.generators)

    def is_normal_in(self, overgroup: MatrixGroup) -> bool:
        """h g h^-1 ∈ self for generators h of overgroup and g of self."""
        alg = self.algebra
        return all(
            self.contains(alg.conj(h, g)) for h in overgroup.generators for g in self.generators
        )

    def to_dict(self) -> dict[str, object]:
        alg = self.algebra
        out: dict[str, object] = {
            "label": self.label,
            "ring": str(self.ring),
            "generators": [alg.to_json(g) for g in self.generators],
        }
        if self._elements is not None:
            out["order"] = len(self._elements)
        return out


def enumerate_subgroup(
    ring: RingDescriptor,
    generators: Sequence[Matrix],
    cap: int = DEFAULT_ENUMERATION_CAP,
    label: str = "",
) -> MatrixGroup:
    """
    Enumerate ⟨generators⟩ by BFS; the identity comes first.

    Raises:
        CapExceeded: closure passes ``cap`` elements.
        BadInput: a generator is not invertible.
    """
    alg = MatrixAlgebra(ring)
    for g in generators:
        if not ring.is_unit(alg.det(g)):
            raise BadInput(f"generator {alg.format(g)} is not invertible")
    group = MatrixGroup(ring, tuple(generators), label=label)
    group.enumerate(cap)
    return group


def normal_closure(
    subgroup_gens: Sequence[Matrix],
    ambient: MatrixGroup,
    cap: int = DEFAULT_ENUMERATION_CAP,
    label: str = "",
) -> MatrixGroup:
    """
    Smallest subgroup of ``ambient`` containing ``subgroup_gens`` and normalized
    by ``ambient``'s generators.
    """
    ring = ambient.ring
    alg = MatrixAlgebra(ring)
    gens = list(dict.fromkeys(subgroup_gens))
    while True:
        group = enumerate_subgroup(ring, gens, cap, label=label)
        extra = []
        for h in ambient.generators:
            for g in gens:
                c = alg.conj(h, g)
                if not group.contains(c) and c not in extra:
                    extra.append(c)
        if not extra:
            return group
        gens += extra
