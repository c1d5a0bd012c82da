"""
Group File Parser.

One generator per line as ``a,b;c,d`` (rows separated by ``;``) with
polynomial-string entries; ``#`` starts a comment. A line may hold several
matrices separated by ``|``, giving one generator of a product group:

    # Γ(m) over F_3[T]/(T^2)
    1,T;0,1
    1,0;T,1 | 1,0;2*T,1
"""

from __future__ import annotations

import logging

from hida_fullness.errors import BadInput
from hida_fullness.groups.linear import MatN
from hida_fullness.groups.matrices import Matrix, MatrixAlgebra
from hida_fullness.parsers.ring_spec import parse_element
from hida_fullness.rings.descriptor import RingDescriptor

logger = logging.getLogger(__name__)


def _lines(content: str) -> list[tuple[int, str]]:
    out = []
    for number, raw in enumerate(content.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line))
    return out


def parse_square_matrix(text: str, ring: RingDescriptor) -> MatN:
    """``a,b;c,d`` (any size n) as a tuple of rows."""
    rows = [row.split(",") for row in text.strip().split(";")]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise BadInput(f"{text!r} is not a square matrix")
    return tuple(tuple(parse_element(entry, ring) for entry in row) for row in rows)


def parse_matrix(text: str, ring: RingDescriptor) -> Matrix:
    """A 2×2 matrix in flat (a, b, c, d) form."""
    rows = parse_square_matrix(text, ring)
    if len(rows) != 2:
        raise BadInput(f"expected a 2x2 matrix, got {text!r}")
    (a, b), (c, d) = rows
    return (a, b, c, d)


def parse_group_file(content: str, ring: RingDescriptor, require_sl2: bool = True) -> list[Matrix]:
    """
    Raises:
        BadInput: a malformed line, a product line, or (with ``require_sl2``)
            a matrix of determinant other than 1.
    """
    alg = MatrixAlgebra(ring)
    gens = []
    for number, line in _lines(content):
        if "|" in line:
            raise BadInput(f"line {number}: product generators are only accepted by goursat")
        try:
            x = parse_matrix(line, ring)
        except BadInput as e:
            raise BadInput(f"line {number}: {e}") from None
        if require_sl2 and alg.det(x) != ring.one:
            raise BadInput(f"line {number}: determinant {ring.format(alg.det(x))} is not 1")
        gens.append(x)
    logger.debug(f"parsed {len(gens)} generators over {ring}")
    return gens


def parse_product_file(content: str, ring: RingDescriptor) -> list[tuple[Matrix, ...]]:
    """Generators of a subgroup of a product, one ``|``-separated tuple per line."""
    gens: list[tuple[Matrix, ...]] = []
    width = None
    for number, line in _lines(content):
        parts = tuple(parse_matrix(part, ring) for part in line.split("|"))
        if width is None:
            width = len(parts)
        elif len(parts) != width:
            raise BadInput(f"line {number}: expected {width} factors, got {len(parts)}")
        gens.append(parts)
    return gens


def format_matrix(x: Matrix, ring: RingDescriptor) -> str:
    a, b, c, d = (ring.format(e) for e in x)
    return f"{a},{b};{c},{d}"


def format_group_file(gens: list[Matrix], ring: RingDescriptor, title: str = "") -> str:
    lines = [f"# {title}"] if title else []
    lines.extend(format_matrix(g, ring) for g in gens)
    return "\n".join(lines) + "\n"
