from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping


class Provenance(str, Enum):
    CURVE = "curve"
    SCALING = "scaling"
    DIRECT_SUM = "direct_sum"
    EXTERNAL = "external_citation"
    MEMBERSHIP = "membership"
    ISOMORPHISM = "isomorphism"

    @property
    def verified(self) -> bool:
        return self is not Provenance.EXTERNAL


@dataclass(frozen=True)
class Edge:
    """source -> target in the dominance order; endpoints are graph node keys."""

    source: str
    target: str
    provenance: Provenance
    ref: str
    fixed_source: bool = False
    cited: bool = False
    detail: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)

    @property
    def verified(self) -> bool:
        """False for a citation and for anything derived from one."""
        return self.provenance.verified and not self.cited

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.source, self.target, self.provenance.value, self.ref)

    def to_dict(self) -> dict:
        data = {
            "source": self.source,
            "target": self.target,
            "provenance": self.provenance.value,
            "ref": self.ref,
            "fixed_source": self.fixed_source,
        }
        if self.cited:
            data["cited"] = True
        if self.detail:
            data["detail"] = dict(sorted(self.detail.items()))
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> Edge:
        return cls(
            source=data["source"],
            target=data["target"],
            provenance=Provenance(data["provenance"]),
            ref=data["ref"],
            fixed_source=bool(data.get("fixed_source", False)),
            cited=bool(data.get("cited", False)),
            detail=dict(data.get("detail") or {}),
        )


@dataclass(frozen=True)
class ExternalSpec:
    """Cited degenerations source -> each target."""

    source: str
    targets: tuple[str, ...]
    citation: str

    def edges(self) -> list[Edge]:
        return [Edge(self.source, target, Provenance.EXTERNAL, ref=self.citation) for target in self.targets]
