"""
Two-cocycles with values in a unit group, and their splitting.

Convention, for an action g·a of Γ on A^× (trivial unless given):

    cocycle:     g·b(h, k) · b(g, hk) = b(g, h) · b(gh, k)
    coboundary:  (δζ)(g, h) = ζ(g) · g·ζ(h) · ζ(gh)^-1

Splitting over a finite local ring A of odd residue characteristic p goes in
two steps. A residual splitting ζ_0 is searched among Teichmüller
representatives; what is left takes values in 1 + m, which is a p-group, so
averaging over Γ and taking |Γ|-th roots splits it exactly when p ∤ |Γ|.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

from hida_fullness.errors import BadInput, NotFound, ResidualObstruction, TooLarge
from hida_fullness.groups.finite import FiniteGroup
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor
from hida_fullness.rings.element import RingElement
from hida_fullness.rings.morphism import DEFAULT_SEARCH_CAP, RingMorphism
from hida_fullness.rings.padic import teichmuller

logger = logging.getLogger(__name__)

Action = Mapping[int, RingMorphism]


@dataclass
class Cocycle2:
    group: FiniteGroup
    ring: RingDescriptor
    values: dict[tuple[int, int], Coeffs]
    action: Action | None = None

    def act(self, g: int, a: Coeffs) -> Coeffs:
        if self.action is None:
            return a
        return self.action[g](a)

    def __call__(self, g: int, h: int) -> Coeffs:
        return self.values[(g, h)]

    def is_cocycle(self) -> bool:
        """The cocycle identity on every triple."""
        r, grp = self.ring, self.group
        for g, h, k in itertools.product(grp.elements, repeat=3):
            left = r.mul(self.act(g, self(h, k)), self(g, grp.mul(h, k)))
            right = r.mul(self(g, h), self(grp.mul(g, h), k))
            if left != right:
                return False
        return True

    def coboundary(self, zeta: Mapping[int, Coeffs]) -> Cocycle2:
        r, grp = self.ring, self.group
        values = {
            (g, h): r.mul(r.mul(zeta[g], self.act(g, zeta[h])), r.inverse(zeta[grp.mul(g, h)]))
            for g in grp.elements
            for h in grp.elements
        }
        return Cocycle2(grp, r, values, self.action)

    def is_split_by(self, zeta: Mapping[int, Coeffs]) -> bool:
        return self.coboundary(zeta).values == self.values

    def to_dict(self) -> dict[str, object]:
        fmt = self.ring.format
        return {
            "group_order": self.group.order,
            "ring": str(self.ring),
            "table": [[fmt(self(g, h)) for h in self.group.elements] for g in self.group.elements],
        }


@dataclass
class CocycleSplitting:
    zeta: dict[int, Coeffs]
    residual: dict[int, Coeffs]
    residual_candidates: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self, ring: RingDescriptor) -> dict[str, object]:
        return {
            "zeta": {str(g): ring.format(v) for g, v in sorted(self.zeta.items())},
            "residual": {str(g): ring.format(v) for g, v in sorted(self.residual.items())},
            "residual_candidates": self.residual_candidates,
        }


def _teichmuller_units(ring: RingDescriptor) -> list[Coeffs]:
    return sorted({teichmuller(RingElement(ring, u)).coeffs for u in ring.units()})


def _residual_search(
    b: Cocycle2, mu: list[Coeffs], search_cap: int
) -> tuple[dict[int, Coeffs], int]:
    ring, grp = b.ring, b.group
    total = len(mu) ** grp.order
    if total > search_cap:
        raise TooLarge(f"residual search over {total} functions exceeds {search_cap}")
    residual_b = {
        key: teichmuller(RingElement(ring, value)).coeffs for key, value in b.values.items()
    }
    tried = 0
    for values in itertools.product(mu, repeat=grp.order):
        tried += 1
        zeta = dict(enumerate(values))
        if b.coboundary(zeta).values == residual_b:
            return zeta, tried
    raise ResidualObstruction(
        f"no residual splitting among {tried} functions into the Teichmüller units",
        stage="split_tsigma_cocycle",
    )


def split_tsigma_cocycle(b: Cocycle2, search_cap: int = DEFAULT_SEARCH_CAP) -> CocycleSplitting:
    """
    ζ: Γ -> A^× with b = δζ.

    Raises:
        BadInput: p divides |Γ|, or b is not a cocycle.
        ResidualObstruction: the residual class does not split.
    """
    ring, grp = b.ring, b.group
    n = grp.order
    p = ring.prime
    if n % p == 0:
        raise BadInput(f"|Γ| = {n} is divisible by the residue characteristic {p}")
    if not b.is_cocycle():
        raise BadInput("values do not satisfy the cocycle identity")

    mu = _teichmuller_units(ring)
    zeta0, tried = _residual_search(b, mu, search_cap)
    delta0 = b.coboundary(zeta0)
    rest = {
        key: ring.mul(value, ring.inverse(delta0.values[key])) for key, value in b.values.items()
    }

    one_plus_m = ring.size // (len(mu) + 1)
    root = pow(n, -1, one_plus_m)
    zeta: dict[int, Coeffs] = {}
    for g in grp.elements:
        phi = ring.one
        for k in grp.elements:
            phi = ring.mul(phi, rest[(g, k)])
        zeta[g] = ring.mul(zeta0[g], ring.power(phi, root))

    if not b.is_split_by(zeta):
        raise NotFound("lifted splitting fails the coboundary check", stage="split_tsigma_cocycle")
    logger.debug(f"cocycle over a group of order {n} split after {tried} residual candidates")
    return CocycleSplitting(zeta, zeta0, tried)
