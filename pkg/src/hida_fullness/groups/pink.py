"""
Pink Lie Algebras — the additive tower attached to a p-subgroup of SL_2(A).

    Θ(x)  = x - ½tr(x)
    L_1   = additive span of Θ(G)
    C     = tr(L_1 · L_1)
    L_n   = [L_1, L_{n-1}]
    M_n   = C ⊕ L_n
    H_n   = {x ∈ SL_2(A) : Θ(x) ∈ L_n, tr(x) - 2 ∈ C}

H_n is materialized from L_n: writing x = t + v with v = Θ(x) trace-zero,
det x = t² + det v, so t is the square root of 1 - det v in 1 + m (the root
-s is excluded because tr(x) - 2 ∈ C ⊆ m).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from hida_fullness.errors import NotPGroup
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.groups.matrix_group import (
    DEFAULT_ENUMERATION_CAP,
    MatrixGroup,
    normal_closure,
)
from hida_fullness.lattices.howell import SubLattice
from hida_fullness.lattices.ideals import matrix_span
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.padic import sqrt_one_plus_m

logger = logging.getLogger(__name__)


def theta(alg: MatrixAlgebra, x: Matrix) -> Matrix:
    """Θ(x) = x - ½tr(x)."""
    ring = alg.ring
    half_trace = ring.mul(ring.inverse(ring.from_int(2)), alg.tr(x))
    return alg.sub(x, alg.scalar(half_trace))


def _scalar_span(ring: RingDescriptor, values: list[Coeffs]) -> SubLattice:
    rows = [tuple(int(c) for c in v) for v in values] + list(ring.relations())
    return SubLattice.span(rows, ring.modulus, ring.rank)


def lattice_matrices(alg: MatrixAlgebra, lattice: SubLattice) -> list[Matrix]:
    """Basis rows of a matrix lattice as matrices."""
    out = []
    for row in lattice.basis:
        m = alg.unflatten(row)
        if m != alg.zero and m not in out:
            out.append(m)
    return out


def lattice_members(alg: MatrixAlgebra, lattice: SubLattice) -> list[Matrix]:
    """Every matrix in a lattice, without repeats."""
    return list(dict.fromkeys(alg.unflatten(v) for v in lattice.elements()))


@dataclass
class PinkData:
    """
    The Pink tower of a p-group. ``layers[0]`` is L_1, ``layers[n-1]`` is L_n.
    """

    ring: RingDescriptor
    layers: list[SubLattice]
    c_trace: SubLattice
    m_tower: list[SubLattice] = field(default_factory=list)
    h_tower: list[MatrixGroup] = field(default_factory=list)

    @property
    def l1(self) -> SubLattice:
        return self.layers[0]

    @property
    def l_tower(self) -> list[SubLattice]:
        """L_2, ..., L_depth."""
        return self.layers[1:]

    @property
    def depth(self) -> int:
        return len(self.layers)

    def layer(self, n: int) -> SubLattice:
        return self.layers[n - 1]

    def h(self, n: int) -> MatrixGroup:
        return self.h_tower[n - 1]

    def to_dict(self) -> dict[str, object]:
        return {
            "ring": str(self.ring),
            "L": {str(i + 1): lat.to_rows() for i, lat in enumerate(self.layers)},
            "C": self.c_trace.to_rows(),
            "M": {str(i + 1): lat.to_rows() for i, lat in enumerate(self.m_tower)},
            "H_orders": {str(i + 1): h.order for i, h in enumerate(self.h_tower)},
        }


def _h_group(alg: MatrixAlgebra, layer: SubLattice, c_trace: SubLattice, n: int) -> MatrixGroup:
    ring = alg.ring
    two = ring.from_int(2)
    elements: list[Matrix] = []
    seen: set[Matrix] = set()
    for v in lattice_members(alg, layer):
        one_minus_det = ring.sub(ring.one, alg.det(v))
        t = sqrt_one_plus_m(RingElement(ring, one_minus_det)).coeffs
        if not c_trace.contains(ring.sub(ring.mul(two, t), two)):
            continue
        x = alg.add(alg.scalar(t), v)
        if x not in seen:
            seen.add(x)
            elements.append(x)
    return MatrixGroup.from_elements(ring, elements, label=f"H_{n}")


def pink_tower(
    group: MatrixGroup,
    depth: int = 2,
    cap: int = DEFAULT_ENUMERATION_CAP,
    with_h: bool = True,
) -> PinkData:
    """
    Compute L_1..L_depth, C, M_n and (optionally) H_n for a p-subgroup of SL_2(A).

    Raises:
        NotPGroup: some generator is not ≡ 1 mod m.
    """
    ring = group.ring
    alg = MatrixAlgebra(ring)
    if not group.is_pgroup():
        raise NotPGroup(f"{group.label or 'group'} is not contained in Γ(m)", stage="pink_tower")
    elements = group.enumerate(cap)

    l1 = matrix_span(ring, [])
    for x in elements:
        v = alg.flatten(theta(alg, x))
        if not l1.contains(v):
            l1 = l1.span_with([v])
    logger.debug(f"L_1 of {group.label or 'group'}: size {l1.size}")

    basis1 = lattice_matrices(alg, l1)
    c_values = [alg.tr(alg.mul(x, y)) for x in basis1 for y in basis1]
    c_trace = _scalar_span(ring, c_values)

    layers = [l1]
    for n in range(2, depth + 1):
        prev = lattice_matrices(alg, layers[-1])
        rows = [alg.flatten(alg.bracket(x, y)) for x in basis1 for y in prev]
        layers.append(matrix_span(ring, rows))
        logger.debug(f"L_{n}: size {layers[-1].size}")

    m_tower = []
    scalars = [alg.flatten(alg.scalar(ring.normalize(c))) for c in c_trace.basis]
    for lat in layers:
        m_tower.append(lat.span_with(scalars))

    data = PinkData(ring, layers, c_trace, m_tower)
    if with_h:
        data.h_tower = [_h_group(alg, lat, c_trace, i + 1) for i, lat in enumerate(layers)]
    return data


def descending_central(
    group: MatrixGroup, n: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> MatrixGroup:
    """G_1 = G, G_{k+1} = (G, G_k) as the normal closure of generator commutators."""
    alg = MatrixAlgebra(group.ring)
    group.enumerate(cap)
    current = group
    for k in range(2, n + 1):
        comms = [alg.commutator(g, h) for g in group.generators for h in current.generators]
        comms = [c for c in dict.fromkeys(comms) if c != alg.identity]
        current = normal_closure(comms, group, cap, label=f"G_{k}")
    return current


@dataclass
class PinkVerdict:
    """Outcome of checking Pink's theorem on one group."""

    contained_in_h1: bool
    normal_in_h1: bool
    layers: dict[int, bool]
    orders: dict[str, int]

    @property
    def passed(self) -> bool:
        return self.contained_in_h1 and self.normal_in_h1 and all(self.layers.values())

    def to_dict(self) -> dict[str, object]:
        return {
            "contained_in_H1": self.contained_in_h1,
            "normal_in_H1": self.normal_in_h1,
            "H_n_equals_G_n": {str(k): v for k, v in self.layers.items()},
            "orders": self.orders,
            "passed": self.passed,
        }


def verify_pink_theorem(
    group: MatrixGroup,
    depth: int = 3,
    cap: int = DEFAULT_ENUMERATION_CAP,
    tower: PinkData | None = None,
) -> PinkVerdict:
    """
    Check G ⊴ H_1(G) and H_n(G) = G_n (the n-th descending central term, with
    G_2 = (G, G)) for 2 <= n <= depth, by exact set comparison.
    """
    data = tower or pink_tower(group, depth, cap)
    alg = MatrixAlgebra(group.ring)
    elements = group.element_set
    h1 = data.h(1)

    contained = elements <= h1.element_set
    normal = contained and all(
        alg.conj(h, g) in elements for h in h1.elements for g in group.generators
    )
    layers: dict[int, bool] = {}
    orders = {"G": group.order, "H_1": h1.order}
    for n in range(2, depth + 1):
        gn = descending_central(group, n, cap)
        hn = data.h(n)
        layers[n] = gn.element_set == hn.element_set
        orders[f"G_{n}"] = gn.order
        orders[f"H_{n}"] = hn.order
    verdict = PinkVerdict(contained, normal, layers, orders)
    logger.info(f"Pink check on {group.label or 'group'}: passed={verdict.passed}")
    return verdict


def lie_surjects(group: MatrixGroup, reduced: MatrixGroup, layer: int = 2) -> bool:
    """The map L_n(G) -> L_n(Ḡ) induced by reduction is onto."""
    alg_src = MatrixAlgebra(group.ring)
    alg_tgt = MatrixAlgebra(reduced.ring)
    source = pink_tower(group, layer, with_h=False).layer(layer)
    target = pink_tower(reduced, layer, with_h=False).layer(layer)
    images = [
        alg_tgt.flatten(alg_tgt.matrix(*alg_src.unflatten(row))) for row in source.basis
    ]
    return matrix_span(reduced.ring, images).basis == target.basis
