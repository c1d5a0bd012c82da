"""
Finite Groups — Cayley-table groups for the obstruction and cocycle machinery.

Elements are the indices ``0..order-1`` with 0 the identity. A group built from
concrete objects (permutations, matrices) keeps them as ``labels`` so results
can be mapped back.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any, TypeVar

from hida_fullness.errors import BadInput, TooLarge
from hida_fullness.groups.closure import closure
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import DEFAULT_ENUMERATION_CAP, MatrixGroup
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, finite_field

logger = logging.getLogger(__name__)

DEFAULT_SUBGROUP_LIMIT = 10_000

T = TypeVar("T", bound=Hashable)
V = TypeVar("V", bound=Hashable)


@dataclass
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    labels: tuple[Any, ...] = ()
    name: str = ""
    _inverse: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if not self.labels:
            self.labels = tuple(range(len(self.table)))
        if not self._inverse:
            inv = []
            for i, row in enumerate(self.table):
                try:
                    inv.append(row.index(0))
                except ValueError:
                    name = self.name or "group"
                    raise BadInput(f"element {i} of {name} has no inverse") from None
            self._inverse = tuple(inv)

    # ── construction ──

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
        """
        Validate and wrap a multiplication table.

        Raises:
            BadInput: the table is not square, 0 is not the identity, some
                row is not a permutation, or multiplication is not associative.
        """
        n = len(table)
        rows = tuple(tuple(int(v) for v in row) for row in table)
        if n == 0 or any(len(row) != n for row in rows):
            raise BadInput("multiplication table must be a nonempty square")
        if rows[0] != tuple(range(n)) or any(row[0] != i for i, row in enumerate(rows)):
            raise BadInput("element 0 must be the identity")
        for row in rows:
            if sorted(row) != list(range(n)):
                raise BadInput("every row of the table must be a permutation")
        for a, b, c in itertools.product(range(n), repeat=3):
            if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
                raise BadInput(f"multiplication is not associative at ({a}, {b}, {c})")
        return cls(rows, name=name)

    @classmethod
    def from_generators(
        cls,
        generators: Sequence[T],
        mul: Callable[[T, T], T],
        identity: T,
        cap: int = DEFAULT_ENUMERATION_CAP,
        name: str = "",
    ) -> FiniteGroup:
        """Enumerate ⟨generators⟩ and tabulate it; the identity gets index 0."""
        elements = closure(generators, mul, identity, cap)
        index = {x: i for i, x in enumerate(elements)}
        table = tuple(tuple(index[mul(x, y)] for y in elements) for x in elements)
        logger.debug(f"tabulated {name or 'group'} of order {len(elements)}")
        return cls(table, tuple(elements), name)

    @classmethod
    def from_matrix_group(
        cls, group: MatrixGroup, cap: int = DEFAULT_ENUMERATION_CAP
    ) -> FiniteGroup:
        alg = group.algebra
        return cls.from_generators(group.generators, alg.mul, alg.identity, cap, group.label)

    # ── basic data ──

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.table[self.table[g][h]][self._inverse[g]]

    def power(self, a: int, e: int) -> int:
        out = 0
        for _ in range(e % self.element_order(a)):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def index_of(self, label: Any) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise BadInput(f"{label!r} is not an element of {self.name or 'the group'}") from None

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in range(a))

    # ── subgroups ──

    def generate(self, subset: Iterable[int]) -> frozenset[int]:
        return frozenset(closure(list(subset), self.mul, 0, self.order))

    def generators(self, subset: Iterable[int] | None = None) -> list[int]:
        """Greedy generating set of ⟨subset⟩ (the whole group by default)."""
        pool = sorted(self.elements if subset is None else self.generate(subset))
        chosen: list[int] = []
        span = frozenset([0])
        for x in pool:
            if x not in span:
                chosen.append(x)
                span = self.generate(chosen)
        return chosen

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return 0 in s and all(self.table[a][self._inverse[b]] in s for a in s for b in s)

    def is_normal(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return self.is_subgroup(s) and all(self.conj(g, h) in s for g in self.elements for h in s)

    def derived_subgroup(self, subgroup: Iterable[int] | None = None) -> frozenset[int]:
        """[U, U] for a subgroup U, the whole group by default."""
        members = list(self.elements if subgroup is None else frozenset(subgroup))
        comms = {
            self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
            for a in members
            for b in members
        }
        return self.generate(comms)

    def subgroups(
        self, max_index: int, limit: int = DEFAULT_SUBGROUP_LIMIT
    ) -> list[frozenset[int]]:
        """
        Every subgroup of index <= ``max_index``, smallest first.

        Subgroups are reached by joining cyclic subgroups one at a time.

        Raises:
            TooLarge: more than ``limit`` subgroups turn up along the way.
        """
        if max_index <= 1:
            return [frozenset(self.elements)]
        cyclic = {self.generate([g]) for g in self.elements}
        found = set(cyclic)
        frontier = list(found)
        while frontier:
            new = []
            for u in frontier:
                for c in cyclic:
                    if c <= u:
                        continue
                    v = self.generate(u | c)
                    if v in found:
                        continue
                    found.add(v)
                    new.append(v)
                    if len(found) > limit:
                        raise TooLarge(
                            f"{self.name or 'group'} has more than {limit} subgroups"
                        )
            frontier = new
        small = [u for u in found if self.order <= max_index * len(u)]
        return sorted(small, key=lambda u: (len(u), sorted(u)))

    def center(self) -> frozenset[int]:
        return frozenset(
            a
            for a in self.elements
            if all(self.table[a][b] == self.table[b][a] for b in self.elements)
        )

    def cosets(self, subgroup: Iterable[int]) -> list[tuple[int, ...]]:
        """Left cosets gH sorted by smallest member; the coset of 0 comes first."""
        h = sorted(frozenset(subgroup))
        seen: set[int] = set()
        out = []
        for g in self.elements:
            if g in seen:
                continue
            coset = tuple(sorted(self.table[g][x] for x in h))
            seen.update(coset)
            out.append(coset)
        return out

    def quotient(self, normal: Iterable[int]) -> tuple[FiniteGroup, tuple[int, ...]]:
        """
        G/N as a table group plus the projection G -> G/N (as a tuple of indices).

        Raises:
            BadInput: ``normal`` is not a normal subgroup.
        """
        n = frozenset(normal)
        if not self.is_normal(n):
            raise BadInput("quotient needs a normal subgroup")
        cosets = self.cosets(n)
        projection = [0] * self.order
        for k, coset in enumerate(cosets):
            for g in coset:
                projection[g] = k
        reps = [coset[0] for coset in cosets]
        table = tuple(
            tuple(projection[self.table[a][b]] for b in reps) for a in reps
        )
        quotient_group = FiniteGroup(table, tuple(reps), f"{self.name or 'G'}/N")
        return quotient_group, tuple(projection)

    # ── homomorphisms and characters ──

    def extend_homomorphism(
        self,
        gen_images: dict[int, V],
        mul: Callable[[V, V], V],
        identity: V,
    ) -> dict[int, V] | None:
        """
        The homomorphism determined by images of generators, or None when the
        assignment is inconsistent.
        """
        images: dict[int, V] = {0: identity}
        frontier = [0]
        gens = list(gen_images)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    value = mul(images[x], gen_images[g])
                    if y in images:
                        if images[y] != value:
                            return None
                        continue
                    images[y] = value
                    nxt.append(y)
            frontier = nxt
        for g, value in gen_images.items():
            if images.get(g) != value:
                return None
        if len(images) != self.order:
            return None
        return images

    def characters(self, field_ring: RingDescriptor) -> list[dict[int, Coeffs]]:
        """Every homomorphism into field_ring^×, trivial character first."""
        gens = self.generators()
        units = list(field_ring.units())
        out = []
        for values in itertools.product(units, repeat=len(gens)):
            assignment = dict(zip(gens, values, strict=True))
            chi = self.extend_homomorphism(assignment, field_ring.mul, field_ring.one)
            if chi is not None:
                out.append(chi)
        logger.debug(f"{self.name or 'group'} has {len(out)} characters into {field_ring}")
        return out

    def to_dict(self) -> dict[str, object]:
        return {"name": self.name, "order": self.order, "table": [list(r) for r in self.table]}


# ──────────────────────────────────────────────
# Standard groups
# ──────────────────────────────────────────────


def cyclic_group(n: int) -> FiniteGroup:
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(table, name=f"C{n}")


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p ∘ q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def symmetric_group(n: int) -> FiniteGroup:
    identity = tuple(range(n))
    if n == 1:
        return FiniteGroup(((0,),), (identity,), "S1")
    cycle = tuple(range(1, n)) + (0,)
    swap = (1, 0) + tuple(range(2, n))
    return FiniteGroup.from_generators([cycle, swap], _compose, identity, name=f"S{n}")


def quaternion_group() -> FiniteGroup:
    """Q8 as the subgroup of SL_2(F_3) generated by i = [[0,1],[2,0]], j = [[1,1],[1,2]]."""
    alg = MatrixAlgebra(finite_field(3))
    i: Matrix = ((0,), (1,), (2,), (0,))
    j: Matrix = ((1,), (1,), (1,), (2,))
    return FiniteGroup.from_generators([i, j], alg.mul, alg.identity, name="Q8")


def direct_product(first: FiniteGroup, second: FiniteGroup) -> FiniteGroup:
    n2 = second.order
    order = first.order * n2
    table = tuple(
        tuple(
            first.table[a // n2][b // n2] * n2 + second.table[a % n2][b % n2]
            for b in range(order)
        )
        for a in range(order)
    )
    labels = tuple((x, y) for x in first.labels for y in second.labels)
    return FiniteGroup(table, labels, f"{first.name}x{second.name}")
