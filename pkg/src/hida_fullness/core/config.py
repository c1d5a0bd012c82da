"""
Runtime limits for enumerations and searches.

The enumeration cap resolves as: explicit ``--cap`` flag, then the
``IFL_CAP`` environment variable, then the default.
"""

import logging
import os
from dataclasses import dataclass, replace

from hida_fullness.errors import BadInput
from hida_fullness.groups.matrix_group import DEFAULT_ENUMERATION_CAP
from hida_fullness.lattices.ideals import IDEAL_ENUMERATION_LIMIT
from hida_fullness.rings.morphism import DEFAULT_AUTOMORPHISM_LIMIT, DEFAULT_SEARCH_CAP

logger = logging.getLogger(__name__)

CAP_ENV_VAR = "IFL_CAP"


@dataclass(frozen=True)
class Limits:
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    search_cap: int = DEFAULT_SEARCH_CAP
    ideal_ring_bound: int = IDEAL_ENUMERATION_LIMIT
    automorphism_limit: int = DEFAULT_AUTOMORPHISM_LIMIT

    def __post_init__(self) -> None:
        for name in ("enumeration_cap", "search_cap", "ideal_ring_bound", "automorphism_limit"):
            if getattr(self, name) < 1:
                raise BadInput(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def resolve(cls, cap: int | None = None, env: dict[str, str] | None = None) -> "Limits":
        """
        Raises:
            BadInput: ``IFL_CAP`` is set but is not a positive integer.
        """
        env = os.environ if env is None else env
        if cap is not None:
            return cls(enumeration_cap=cap)
        raw = env.get(CAP_ENV_VAR)
        if raw:
            try:
                value = int(raw)
            except ValueError:
                raise BadInput(f"{CAP_ENV_VAR}={raw!r} is not an integer") from None
            logger.debug(f"enumeration cap {value} from {CAP_ENV_VAR}")
            return cls(enumeration_cap=value)
        return cls()

    def with_search_cap(self, search_cap: int) -> "Limits":
        return replace(self, search_cap=search_cap)
