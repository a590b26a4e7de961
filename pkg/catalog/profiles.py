from __future__ import annotations

import logging
from typing import Union

from algebra.invariants import InvariantProfile, invariant_profile
from catalog.models import AlgebraId, Catalog

logger = logging.getLogger(__name__)


class ProfileCache:
    """Computed invariant profiles keyed by algebra id.

    Cohomology is the expensive part; profiles computed without it are
    upgraded on the first request that needs it.
    """

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self._profiles: dict[str, InvariantProfile] = {}

    def get(self, algebra: Union[AlgebraId, str], with_cohomology: bool = False) -> InvariantProfile:
        if isinstance(algebra, str):
            algebra = AlgebraId(algebra)
        cached = self._profiles.get(algebra.key)
        if cached is not None and (cached.h2_dim is not None or not with_cohomology):
            return cached
        profile = invariant_profile(self.catalog.instantiate(algebra), with_cohomology=with_cohomology)
        logger.debug("Computed profile for %s", algebra)
        self._profiles[algebra.key] = profile
        return profile

    def __len__(self) -> int:
        return len(self._profiles)
