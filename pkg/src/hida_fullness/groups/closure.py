"""
Breadth-first closure of a finite group from generators.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Callable, Hashable, Sequence
from typing import TypeVar

from hida_fullness.errors import CapExceeded

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)

PROGRESS_EVERY = 100_000


def closure(
    generators: Sequence[T],
    mul: Callable[[T, T], T],
    identity: T,
    cap: int,
    inverse: Callable[[T], T] | None = None,
) -> list[T]:
    """
    Enumerate the subgroup generated by ``generators``.

    Elements come out in BFS order from the identity, right-multiplying by the
    generators (and their inverses when ``inverse`` is given) in the order
    supplied, so the listing is deterministic.

    Raises:
        CapExceeded: more than ``cap`` elements were produced.
    """
    steps = list(dict.fromkeys(generators))
    if inverse is not None:
        steps += [inverse(g) for g in steps]
        steps = list(dict.fromkeys(steps))

    elements = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in steps:
            y = mul(x, g)
            if y in seen:
                continue
            seen.add(y)
            elements.append(y)
            queue.append(y)
            if len(elements) > cap:
                raise CapExceeded(len(elements), cap)
            if len(elements) % PROGRESS_EVERY == 0:
                logger.debug(f"closure: {len(elements)} elements so far")
    return elements
