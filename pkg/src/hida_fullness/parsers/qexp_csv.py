"""
q-Expansion CSV Parser.

``n,value`` rows for n = 1, 2, ..., N with no gaps; values are integers,
rationals ``a/b`` or polynomial strings in the coefficient ring. Header
comments set the context:

    # level=32
    # weight=2
    n,value
    1,1
    2,0
"""

from __future__ import annotations

import re

from hida_fullness.errors import BadInput
from hida_fullness.forms.characters import DirichletCharacter
from hida_fullness.forms.qexpansion import QExpansion
from hida_fullness.parsers.ring_spec import parse_element
from hida_fullness.rings.descriptor import RingDescriptor, rational

_META = re.compile(r"#\s*([a-z_]+)\s*=\s*(\S+)")


def parse_qexp_csv(
    content: str,
    ring: RingDescriptor | None = None,
    character: DirichletCharacter | None = None,
    label: str = "",
) -> QExpansion:
    """
    Raises:
        BadInput: a malformed row, a gap in n, or a missing level.
    """
    ring = ring or rational()
    meta: dict[str, str] = {}
    values = []
    for number, raw in enumerate(content.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = _META.match(line)
            if match:
                meta[match.group(1)] = match.group(2)
            continue
        if line.lower().replace(" ", "") == "n,value":
            continue
        parts = line.split(",", 1)
        if len(parts) != 2:
            raise BadInput(f"line {number}: expected n,value, got {line!r}")
        try:
            n = int(parts[0])
        except ValueError:
            raise BadInput(f"line {number}: index {parts[0]!r} is not an integer") from None
        if n != len(values) + 1:
            raise BadInput(f"line {number}: expected n={len(values) + 1}, got n={n}")
        values.append(parse_element(parts[1], ring))

    if not values:
        raise BadInput("q-expansion file has no coefficients")
    if "level" not in meta:
        raise BadInput("q-expansion file needs a '# level=N' header")
    try:
        level = int(meta["level"])
        weight = int(meta["weight"]) if "weight" in meta else None
    except ValueError:
        raise BadInput("level and weight must be integers") from None
    label = label or meta.get("label", "")
    return QExpansion(ring, tuple(values), level, weight, character, label)


def format_qexp_csv(f: QExpansion) -> str:
    lines = [f"# level={f.level}"]
    if f.weight is not None:
        lines.append(f"# weight={f.weight}")
    if f.label:
        lines.append(f"# label={f.label}")
    lines.append("n,value")
    lines.extend(f"{n},{f.ring.format(c)}" for n, c in enumerate(f.coeffs, start=1))
    return "\n".join(lines) + "\n"
