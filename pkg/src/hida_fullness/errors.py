"""
Exception hierarchy for hida-fullness.

Every failure the library can report is a subclass of ``HidaFullnessError``,
which itself derives from ``ValueError`` so callers that only care about bad
input can keep catching the builtin. Pipeline errors carry the name of the
stage that failed; the CLI prints it on the diagnostic line.
"""

from __future__ import annotations


class HidaFullnessError(ValueError):
    """Base class for all library errors."""

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.stage = stage


# ── Ring arithmetic ─────────────────────────────────────────────


class NonUnit(HidaFullnessError):
    """An element that had to be inverted is not a unit."""


class BadDomain(HidaFullnessError):
    """An argument lies outside the domain of an operation (e.g. sqrt off 1 + m)."""


class BadInput(HidaFullnessError):
    """Malformed or inconsistent input values."""


class Unsupported(HidaFullnessError):
    """A configuration the toolkit deliberately does not handle."""


class RingMismatch(HidaFullnessError):
    """Two operands live over different coefficient rings."""


class TooLarge(HidaFullnessError):
    """A search or enumeration space exceeds its configured bound."""


class CapExceeded(TooLarge):
    """A group closure grew past the enumeration cap."""

    def __init__(self, count: int, cap: int, *, flag: str = "--cap", stage: str | None = None):
        super().__init__(
            f"enumeration exceeded cap {cap} after {count} elements (raise {flag} or IFL_CAP)",
            stage=stage,
        )
        self.count = count
        self.cap = cap
        self.flag = flag


# ── Groups and the fullness pipeline ────────────────────────────


class Degenerate(HidaFullnessError):
    """A lattice or ideal that must be nonzero came out zero."""


class NotPGroup(HidaFullnessError):
    """A group element is not congruent to 1 modulo the maximal ideal."""


class NotStable(HidaFullnessError):
    """A lattice is not stable under the operator it was required to commute with."""


class BadJ(HidaFullnessError):
    """The normalizing diagonal matrix j does not separate eigenvalues mod p."""


class Unverified(HidaFullnessError):
    """A certificate failed its direct membership confirmation."""

    def __init__(self, message: str, *, stage: str | None = None, certificate: object = None):
        super().__init__(message, stage=stage)
        self.certificate = certificate


class NotRegular(HidaFullnessError):
    """Diagonal entries collide modulo p."""


class NotTriangular(HidaFullnessError):
    """A matrix expected to be upper triangular is not."""


class NotSemisimple(HidaFullnessError):
    """A commutant analysis found a non-semisimple action."""


# ── Group theory searches ──────────────────────────────────────


class HypothesisFailed(HidaFullnessError):
    """A structural hypothesis of a construction does not hold on the data."""


class NotFound(HidaFullnessError):
    """An exhaustive search finished without a witness."""


class ResidualObstruction(HidaFullnessError):
    """A residual 2-cocycle does not split."""


# ── q-expansions and characters ────────────────────────────────


class NotEigen(HidaFullnessError):
    """A q-expansion is not an eigenvector of the requested Hecke operator."""


class TruncationTooShort(HidaFullnessError):
    """An operation would produce an empty q-expansion."""


class BadLevel(HidaFullnessError):
    """A level does not satisfy the divisibility an operator needs."""


class IncompatibleCharacters(HidaFullnessError):
    """Twist characters do not satisfy the required composition law."""


class NonIntegralWeightOffset(HidaFullnessError):
    """An eta-product's leading exponent is not a positive integer."""
