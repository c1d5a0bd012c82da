"""
Galois descent over finite fields: descending conjugators, classifying the
commutant of a residual image, and invariants of a twisted Frobenius action.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from hida_fullness.errors import BadInput, NotFound, NotRegular, NotSemisimple
from hida_fullness.groups.linear import MatN, SquareMatrices
from hida_fullness.rings.descriptor import Coeffs, RingDescriptor, RingKind
from hida_fullness.rings.morphism import RingMorphism

logger = logging.getLogger(__name__)


def _require_field(ring: RingDescriptor) -> None:
    if ring.kind is not RingKind.FINITE_FIELD:
        raise BadInput(f"expected a finite field, got {ring}")


def field_embedding(base: RingDescriptor, ext: RingDescriptor) -> RingMorphism:
    """
    An embedding F_q -> F_q^k (the first root of the defining polynomial of F_q
    in element order).

    Raises:
        BadInput: not finite fields of the same characteristic with degree dividing.
    """
    _require_field(base)
    _require_field(ext)
    if base.p != ext.p or ext.field_degree % base.field_degree:
        raise BadInput(f"{base} does not embed in {ext}")
    if base.field_degree == 1:
        return RingMorphism(base, ext, (), label="incl")
    poly = [ext.from_int(c) for c in base.field_poly]
    for candidate in ext.elements():
        if ext.is_zero(ext.evaluate(poly, candidate)):
            return RingMorphism(base, ext, (candidate,), label="incl")
    raise BadInput(f"no root of the defining polynomial of {base} in {ext}")


def _pullback(embedding: RingMorphism) -> dict[Coeffs, Coeffs]:
    return {embedding.apply(a): a for a in embedding.source.elements()}


def _descend(back: dict[Coeffs, Coeffs], x: MatN) -> MatN | None:
    rows = []
    for row in x:
        out = []
        for e in row:
            if e not in back:
                return None
            out.append(back[e])
        rows.append(tuple(out))
    return tuple(rows)


# ──────────────────────────────────────────────
# Hilbert 90 descent
# ──────────────────────────────────────────────


@dataclass
class DescentResult:
    z: MatN
    torus_element: MatN
    searched: int

    def to_dict(self, ring: RingDescriptor, ext: RingDescriptor) -> dict[str, object]:
        n = len(self.z)
        return {
            "z": SquareMatrices(ring, n).to_json(self.z),
            "torus_element": SquareMatrices(ext, n).to_json(self.torus_element),
            "searched": self.searched,
        }


def split_descent(
    matrices: Sequence[MatN],
    y: MatN,
    base: RingDescriptor,
    ext: RingDescriptor,
) -> DescentResult:
    """
    Given S over K and y over an extension with y S y^-1 ⊆ GL_n(K), find
    z ∈ GL_n(K) with z S z^-1 = y S y^-1.

    Any such z is y·t with t in the centralizer of S; the centralizer torus is
    searched for t with y·t fixed by Frobenius, which Hilbert 90 guarantees.

    Raises:
        BadInput: y S y^-1 is not defined over K.
        NotFound: no rational point in y·Z(S) (preconditions violated).
    """
    n = len(y)
    emb = field_embedding(base, ext)
    back = _pullback(emb)
    alg = SquareMatrices(base, n)
    alg_ext = SquareMatrices(ext, n)
    lifted = [alg_ext.apply(emb, s) for s in matrices]
    y_inv = alg_ext.inv(y)
    for s in lifted:
        if _descend(back, alg_ext.mul(alg_ext.mul(y, s), y_inv)) is None:
            raise BadInput("y S y^-1 is not defined over the base field")

    z = _descend(back, y)
    if z is not None and alg.is_invertible(z):
        return DescentResult(z, alg_ext.identity, 0)

    searched = 0
    for t in alg_ext.lattice_matrices(alg_ext.commutant(lifted)):
        if not alg_ext.is_invertible(t):
            continue
        searched += 1
        z = _descend(back, alg_ext.mul(y, t))
        if z is not None:
            logger.debug(f"descent: rational conjugator after {searched} torus elements")
            return DescentResult(z, t, searched)
    raise NotFound(f"no rational conjugator among {searched} centralizer elements")


# ──────────────────────────────────────────────
# Commutant classification
# ──────────────────────────────────────────────


@dataclass
class CentralizerReport:
    """
    case 1: Z = scalars. case 2: Z a quadratic field, z x z^-1 = [[0, D], [1, 0]]
    for the trace-free part x of a generator. case 3: Z split, z diagonalizes.
    """

    case: int
    commutant_dim: int
    z: MatN
    normal_form: MatN | None
    discriminant: Coeffs | None

    def to_dict(self, ring: RingDescriptor) -> dict[str, object]:
        alg = SquareMatrices(ring, 2)
        return {
            "case": self.case,
            "commutant_dim": self.commutant_dim,
            "z": alg.to_json(self.z),
            "normal_form": None if self.normal_form is None else alg.to_json(self.normal_form),
            "D": None if self.discriminant is None else ring.format(self.discriminant),
        }


def _log_size(size: int, q: int) -> int:
    d = 0
    while size > 1:
        size //= q
        d += 1
    return d


def _square_root(ring: RingDescriptor, x: Coeffs) -> Coeffs | None:
    for s in ring.elements():
        if ring.mul(s, s) == x:
            return s
    return None


def _null_vector(ring: RingDescriptor, m: MatN) -> tuple[Coeffs, Coeffs]:
    """Nonzero v with m v = 0 for a singular 2×2 m."""
    (a, b), (c, d) = m
    if not (ring.is_zero(a) and ring.is_zero(b)):
        return (ring.neg(b), a)
    if not (ring.is_zero(c) and ring.is_zero(d)):
        return (d, ring.neg(c))
    return (ring.one, ring.zero)


def _from_columns(v: tuple[Coeffs, Coeffs], w: tuple[Coeffs, Coeffs]) -> MatN:
    return ((v[0], w[0]), (v[1], w[1]))


def centralizer_classify(image: Sequence[MatN], ring: RingDescriptor) -> CentralizerReport:
    """
    Raises:
        NotRegular: the image is scalar (the commutant is all of M_2).
        NotSemisimple: the commutant is not a field, a split torus or the scalars.
    """
    _require_field(ring)
    alg = SquareMatrices(ring, 2)
    commutant = alg.commutant(list(image))
    dim = _log_size(commutant.size, ring.size)
    logger.debug(f"commutant of the image has dimension {dim}")
    if dim == 4:
        raise NotRegular("the image is scalar; every matrix commutes with it")
    if dim == 1:
        return CentralizerReport(1, 1, alg.identity, None, None)
    if dim != 2:
        raise NotSemisimple(f"commutant of dimension {dim} comes from a non-semisimple action")

    x = next(m for m in alg.lattice_matrices(commutant) if not alg.is_scalar(m))
    half = ring.inverse(ring.from_int(2))
    x0 = alg.sub(x, alg.scalar(ring.mul(half, alg.trace(x))))
    d = ring.neg(alg.det(x0))
    if ring.is_zero(d):
        raise NotSemisimple("a non-scalar element of the commutant is not semisimple")

    root = _square_root(ring, d)
    if root is None:
        v = (ring.one, ring.zero)
        w = (x0[0][0], x0[1][0])
        z = alg.inv(_from_columns(v, w))
        return CentralizerReport(2, 2, z, alg.mul(alg.mul(z, x0), alg.inv(z)), d)

    v1 = _null_vector(ring, alg.sub(x0, alg.scalar(root)))
    v2 = _null_vector(ring, alg.sub(x0, alg.scalar(ring.neg(root))))
    z = alg.inv(_from_columns(v1, v2))
    return CentralizerReport(3, 2, z, alg.mul(alg.mul(z, x0), alg.inv(z)), d)


# ──────────────────────────────────────────────
# Twisted Frobenius invariants
# ──────────────────────────────────────────────


@dataclass
class TwistedInvariant:
    witness: Coeffs
    vector: Coeffs
    scanned: int
    order: int
    fixed_field_size: int
    invariant_count: int

    @property
    def dimension_one(self) -> bool:
        return self.invariant_count == self.fixed_field_size

    def to_dict(self, ring: RingDescriptor) -> dict[str, object]:
        return {
            "witness": ring.format(self.witness),
            "vector": ring.format(self.vector),
            "scanned": self.scanned,
            "order": self.order,
            "fixed_field_size": self.fixed_field_size,
            "dimension_one": self.dimension_one,
        }


def automorphism_order(sigma: RingMorphism) -> int:
    ring = sigma.source
    power = RingMorphism.identity(ring)
    for k in range(1, ring.size + 1):
        power = sigma.compose(power)
        if all(power(g) == g for g in RingMorphism.identity(ring).images):
            return k
    raise BadInput(f"{sigma.label} does not have finite order on {ring}")


def twisted_invariants(
    kappa: RingDescriptor, alpha: Coeffs, sigma: RingMorphism
) -> TwistedInvariant:
    """
    The semilinear map g(v) = α·σ(v) on κ, with N(α) = ασ(α)···σ^(n-1)(α) = 1.

    Scans a ∈ κ^× for a nonzero orbit sum w = Σ g^k(a) (one exists by Artin's
    independence of characters); w is then g-invariant.

    Raises:
        BadInput: κ is not a finite field or N(α) != 1.
        NotFound: every orbit sum vanished.
    """
    _require_field(kappa)
    n = automorphism_order(sigma)

    norm, conj = kappa.one, alpha
    for _ in range(n):
        norm = kappa.mul(norm, conj)
        conj = sigma(conj)
    if norm != kappa.one:
        raise BadInput(f"N(alpha) = {kappa.format(norm)} is not 1; g^n is not the identity")

    def g(v: Coeffs) -> Coeffs:
        return kappa.mul(alpha, sigma(v))

    scanned = 0
    for a in kappa.units():
        scanned += 1
        total, term = kappa.zero, a
        for _ in range(n):
            total = kappa.add(total, term)
            term = g(term)
        if kappa.is_zero(total):
            continue
        if g(total) != total:
            raise NotFound("orbit sum is not invariant; sigma and alpha are inconsistent")
        fixed = _log_size(kappa.size, kappa.p) // n
        count = sum(1 for v in kappa.elements() if g(v) == v)
        logger.debug(f"twisted invariants: witness after {scanned} elements, {count} invariants")
        return TwistedInvariant(a, total, scanned, n, kappa.p**fixed, count)
    raise NotFound("every orbit sum vanished")
