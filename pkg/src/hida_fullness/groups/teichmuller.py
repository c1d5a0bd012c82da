"""
Teichmüller limits of upper-triangular matrices and the normalizing element j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from hida_fullness.errors import BadInput, NotFound, NotRegular, NotTriangular, Unverified
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.rings.descriptor import RingDescriptor, RingKind

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 64


def residue_field_size(ring: RingDescriptor) -> int:
    match ring.kind:
        case RingKind.ZMOD_PA | RingKind.TRUNC_IWASAWA:
            return ring.p
        case RingKind.FINITE_FIELD:
            return ring.q
    raise BadInput(f"no residue field size known for {ring}")


@dataclass
class TeichmullerLimit:
    limit: Matrix
    j: Matrix
    conjugator: Matrix
    iterations: int

    def to_dict(self, ring: RingDescriptor) -> dict[str, object]:
        alg = MatrixAlgebra(ring)
        return {
            "limit": alg.to_json(self.limit),
            "j": alg.to_json(self.j),
            "conjugator": alg.to_json(self.conjugator),
            "iterations": self.iterations,
        }


def teichmuller_matrix_limit(
    x: Matrix, ring: RingDescriptor, q: int | None = None
) -> TeichmullerLimit:
    """
    lim x^(q^n) = [[ζ, u], [0, ζ']], then P = [[1, u/(ζ-ζ')], [0, 1]] with
    P·limit·P^-1 = j = diag(ζ, ζ').

    A limit that is already diagonal needs no regularity; otherwise ζ - ζ'
    must be a unit.

    Raises:
        NotTriangular: x is not upper triangular.
        NotRegular: the off-diagonal limit entry is nonzero and ζ ≡ ζ' mod m.
        Unverified: the conjugated limit or its diagonal fails the final check.
    """
    alg = MatrixAlgebra(ring)
    q = q or residue_field_size(ring)
    if not alg.is_upper_triangular(x):
        raise NotTriangular(
            f"{alg.format(x)} is not upper triangular", stage="teichmuller_matrix_limit"
        )
    if not ring.is_unit(alg.det(x)):
        raise BadInput(f"{alg.format(x)} is not invertible")

    current = x
    for step in range(1, MAX_ITERATIONS + 1):
        nxt = alg.power(current, q)
        if nxt == current:
            break
        current = nxt
    else:
        raise NotFound(f"x^(q^n) did not stabilize in {MAX_ITERATIONS} steps")

    zeta, u, zeta_p = current[0], current[1], current[3]
    j = alg.diag(zeta, zeta_p)
    if ring.is_zero(u):
        return TeichmullerLimit(current, j, alg.identity, step)

    gap = ring.sub(zeta, zeta_p)
    if not ring.is_unit(gap):
        raise NotRegular(
            f"diagonal entries of {alg.format(x)} agree modulo the maximal ideal",
            stage="teichmuller_matrix_limit",
        )
    w = ring.mul(u, ring.inverse(gap))
    conjugator = alg.e12(w)
    if alg.conj(conjugator, current) != j:
        raise Unverified(
            f"conjugating the limit by {alg.format(conjugator)} does not give {alg.format(j)}",
            stage="teichmuller_matrix_limit",
        )
    if ring.power(zeta, q - 1) != ring.one or ring.power(zeta_p, q - 1) != ring.one:
        raise Unverified(
            f"diagonal of the limit {alg.format(j)} is not of order dividing {q - 1}",
            stage="teichmuller_matrix_limit",
        )
    logger.debug(f"Teichmüller limit of {alg.format(x)}: j = {alg.format(j)} after {step} steps")
    return TeichmullerLimit(current, j, conjugator, step)
