from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import zip_longest
from typing import Optional, Union

from algebra.invariants import InvariantProfile
from catalog.models import AlgebraId, Catalog
from catalog.profiles import ProfileCache

logger = logging.getLogger(__name__)

CONDITIONS = ("aut_strict", "ann", "powers", "center", "nilindex", "associativity")


@dataclass(frozen=True)
class ConditionResult:
    name: str
    holds: bool
    detail: str


@dataclass
class ObstructionReport:
    """Necessary conditions for source -> target; any failure blocks the degeneration."""

    source: str
    target: str
    conditions: list[ConditionResult] = field(default_factory=list)

    @property
    def failed(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.holds]

    @property
    def blocked(self) -> bool:
        return bool(self.failed)

    def describe(self) -> str:
        if not self.blocked:
            return f"{self.source} -> {self.target}: not blocked"
        reasons = "; ".join(f"{c.name} ({c.detail})" for c in self.failed)
        return f"{self.source} -> {self.target}: blocked by {reasons}"

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "blocked": self.blocked,
            "failed": [{"condition": c.name, "detail": c.detail} for c in self.failed],
        }


def _powers(a: InvariantProfile, b: InvariantProfile) -> ConditionResult:
    for m, (da, db) in enumerate(zip_longest(a.power_dims, b.power_dims, fillvalue=0), start=1):
        if da < db:
            return ConditionResult("powers", False, f"dim A^{m} = {da} < {db} = dim B^{m}")
    return ConditionResult("powers", True, "dim A^m >= dim B^m for all m")


def compare_profiles(source: str, a: InvariantProfile, target: str, b: InvariantProfile,
                     include_aut: bool = True) -> ObstructionReport:
    report = ObstructionReport(source, target)
    if include_aut:
        report.conditions.append(ConditionResult(
            "aut_strict", a.aut_dim < b.aut_dim, f"dim Aut {a.aut_dim} vs {b.aut_dim}"))
    report.conditions.append(ConditionResult(
        "ann", a.ann_dim <= b.ann_dim, f"dim Ann {a.ann_dim} vs {b.ann_dim}"))
    report.conditions.append(_powers(a, b))
    report.conditions.append(ConditionResult(
        "center", a.center_dim <= b.center_dim, f"dim Z {a.center_dim} vs {b.center_dim}"))
    report.conditions.append(ConditionResult(
        "nilindex", a.nilindex >= b.nilindex, f"nilindex {a.nilindex} vs {b.nilindex}"))
    report.conditions.append(ConditionResult(
        "associativity", b.associative or not a.associative,
        f"associative {a.associative} vs {b.associative}"))
    return report


def check_obstructions(catalog: Catalog, source: Union[AlgebraId, str], target: Union[AlgebraId, str],
                       profiles: Optional[ProfileCache] = None) -> ObstructionReport:
    profiles = profiles or ProfileCache(catalog)
    source = AlgebraId(source) if isinstance(source, str) else source
    target = AlgebraId(target) if isinstance(target, str) else target
    report = compare_profiles(source.key, profiles.get(source), target.key, profiles.get(target))
    logger.debug("%s", report.describe())
    return report


def obstruction_matrix(catalog: Catalog, ids: list[AlgebraId],
                       profiles: Optional[ProfileCache] = None) -> dict[tuple[str, str], ObstructionReport]:
    """Reports for every ordered pair of distinct ids."""
    profiles = profiles or ProfileCache(catalog)
    return {
        (a.key, b.key): check_obstructions(catalog, a, b, profiles)
        for a in ids
        for b in ids
        if a.key != b.key
    }
