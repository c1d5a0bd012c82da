"""
Table Parsers — Dirichlet characters, Cayley tables and representations.

Character files give the modulus and one phase per unit-group generator:

    modulus=12
    7: 1/2
    5: 1/2

Cayley CSV files hold one row of the multiplication table per line, with
element 0 the identity. Representation files map element indices to
matrices over a finite field: ``3: 2,0;0,4``.
"""

from __future__ import annotations

from fractions import Fraction

from hida_fullness.errors import BadInput
from hida_fullness.forms.characters import DirichletCharacter, unit_group
from hida_fullness.groups.finite import FiniteGroup
from hida_fullness.groups.obstruction import FiniteRep
from hida_fullness.parsers.group_file import parse_square_matrix
from hida_fullness.rings.descriptor import RingDescriptor


def _content_lines(content: str) -> list[str]:
    stripped = (line.split("#", 1)[0].strip() for line in content.splitlines())
    return [line for line in stripped if line]


def parse_character(content: str) -> DirichletCharacter:
    """
    Raises:
        BadInput: no modulus, a line naming something other than a generator,
            or a missing generator.
    """
    modulus = None
    images: dict[int, Fraction] = {}
    for line in _content_lines(content):
        if line.startswith("modulus"):
            modulus = int(line.split("=", 1)[1])
            continue
        if ":" not in line:
            raise BadInput(f"expected 'generator: phase', got {line!r}")
        g, phase = line.split(":", 1)
        try:
            images[int(g)] = Fraction(phase.strip())
        except ValueError:
            raise BadInput(f"bad generator line {line!r}") from None
    if modulus is None:
        raise BadInput("character file needs modulus=")
    gens, _ = unit_group(modulus)
    expected = [g for g, _ in gens]
    if set(images) != set(expected):
        raise BadInput(f"a character mod {modulus} needs phases for the generators {expected}")
    return DirichletCharacter(modulus, tuple(images[g] for g in expected))


def parse_cayley_csv(content: str, name: str = "") -> FiniteGroup:
    rows = []
    for line in _content_lines(content):
        try:
            rows.append([int(v) for v in line.split(",")])
        except ValueError:
            raise BadInput(f"Cayley table row {line!r} is not a list of integers") from None
    return FiniteGroup.from_table(rows, name=name)


def format_cayley_csv(group: FiniteGroup) -> str:
    return "\n".join(",".join(str(v) for v in row) for row in group.table) + "\n"


def parse_rep_file(content: str, group: FiniteGroup, ring: RingDescriptor) -> FiniteRep:
    """
    Raises:
        BadInput: an element outside the group, or matrices of mixed size.
    """
    images = {}
    for line in _content_lines(content):
        if ":" not in line:
            raise BadInput(f"expected 'element: matrix', got {line!r}")
        g, text = line.split(":", 1)
        index = int(g)
        if index not in group.elements:
            raise BadInput(f"element {index} is not in a group of order {group.order}")
        images[index] = parse_square_matrix(text, ring)
    if not images:
        raise BadInput("representation file is empty")
    sizes = {len(x) for x in images.values()}
    if len(sizes) != 1:
        raise BadInput("representation matrices have different sizes")
    return FiniteRep(group, ring, sizes.pop(), images)
