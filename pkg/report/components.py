from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from algebra.invariants import InvariantProfile
from catalog.models import AlgebraId, Catalog
from catalog.profiles import ProfileCache
from deformation.obstructions import compare_profiles
from deformation.edges import Edge
from report.graph import DominanceGraph, GraphError, sort_key

logger = logging.getLogger(__name__)

# Fields compared when two closures of equal dimension would have to coincide.
PROFILE_FIELDS = ("ann_dim", "power_dims", "nilindex", "center_dim", "der_dim", "associative", "jacobi_dim")

DISTINCTION_FIELDS = ("aut_dim", "ann_dim", "j2_dim", "center_dim", "nilindex", "associative",
                      "jacobi_dim", "nilpotency_type", "power_dims")


@dataclass(frozen=True)
class Evidence:
    """Why `other` does not dominate the root."""

    other: str
    kind: str
    detail: str

    def to_dict(self) -> dict:
        return {"other": self.other, "kind": self.kind, "detail": self.detail}


@dataclass
class RigidityVerdict:
    root: str
    dimension: int
    rigid: bool
    reachable: list[str] = field(default_factory=list)
    evidence: list[Evidence] = field(default_factory=list)
    dominated_by: list[str] = field(default_factory=list)
    unexplained: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "dimension": self.dimension,
            "rigid": self.rigid,
            "reachable": self.reachable,
            "evidence": [e.to_dict() for e in self.evidence],
            "dominated_by": self.dominated_by,
            "unexplained": self.unexplained,
        }


@dataclass
class ComponentReport:
    roots: list[str]
    verdicts: list[RigidityVerdict]
    unreached: list[str]
    minimal: bool
    cited_edges: list[Edge] = field(default_factory=list)
    cited_coverage: list[str] = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return bool(self.roots) and not self.unreached and self.minimal and all(v.rigid for v in self.verdicts)

    def summary(self) -> str:
        text = f"{len(self.roots)} components confirmed" if self.confirmed \
            else f"{len(self.roots)} candidate components, not confirmed"
        if self.cited_edges:
            text += f"; {len(self.cited_edges)} edges rest on citations"
        return text

    def to_dict(self) -> dict:
        return {
            "roots": self.roots,
            "confirmed": self.confirmed,
            "minimal": self.minimal,
            "unreached": self.unreached,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "cited_edges": [e.to_dict() for e in self.cited_edges],
            "cited_coverage": self.cited_coverage,
        }


class NodeProfiles:
    """Profiles and closure dimensions of graph nodes; a family stands for its sampled members."""

    def __init__(self, graph: DominanceGraph, catalog: Catalog, profiles: Optional[ProfileCache] = None):
        self.graph = graph
        self.catalog = catalog
        self.profiles = profiles or ProfileCache(catalog)

    def is_family(self, key: str) -> bool:
        return self.graph.nodes[key].is_family

    def members(self, key: str) -> list[AlgebraId]:
        node = self.graph.nodes[key]
        if node.is_family:
            return self.catalog.get(node.label).sample_ids()
        return [node.algebra_id()]

    def profile(self, algebra: AlgebraId) -> InvariantProfile:
        return self.profiles.get(algebra)

    def dimension(self, key: str) -> int:
        """Orbit dimension; a family adds one per parameter to its members' common orbit dimension."""
        node = self.graph.nodes[key]
        dims = {self.profile(m).orbit_dim for m in self.members(key)}
        if len(dims) != 1:
            raise GraphError(f"{key}: sampled members have orbit dimensions {sorted(dims)}")
        dim = dims.pop()
        if node.is_family:
            dim += len(self.catalog.get(node.label).params)
        return dim


def _obstruction(nodes: NodeProfiles, other: str, root: str) -> Optional[Evidence]:
    family_source = nodes.is_family(other)
    for target in nodes.members(root):
        reports = [
            compare_profiles(source.key, nodes.profile(source), target.key, nodes.profile(target),
                             include_aut=not family_source)
            for source in nodes.members(other)
        ]
        common = set.intersection(*({c.name for c in r.failed} for r in reports))
        if common:
            first = reports[0]
            reasons = "; ".join(f"{c.name} ({c.detail})" for c in first.failed if c.name in common)
            scope = f"every sampled member of {other}" if family_source else other
            return Evidence(other, "obstruction", f"{scope} -> {target.key}: {reasons}")
    return None


def exclusion_evidence(nodes: NodeProfiles, other: str, root: str) -> Optional[Evidence]:
    """A machine-checked reason that root is not in the closure of other, if one is found."""
    evidence = _obstruction(nodes, other, root)
    if evidence is not None:
        return evidence
    d_root, d_other = nodes.dimension(root), nodes.dimension(other)
    both_orbits = not nodes.is_family(root) and not nodes.is_family(other)
    if d_root > d_other or (both_orbits and d_root == d_other):
        return Evidence(other, "dimension", f"dim {root} = {d_root} >= {d_other} = dim {other}")
    if d_root == d_other:
        a = nodes.profile(nodes.members(root)[0])
        b = nodes.profile(nodes.members(other)[0])
        for name in PROFILE_FIELDS:
            if a.field_value(name) != b.field_value(name):
                return Evidence(
                    other, "profile",
                    f"equal dimension {d_root} but generic {name} {a.field_value(name)} vs {b.field_value(name)}",
                )
    return None


def rigidity_check(root: str, graph: DominanceGraph, nodes: NodeProfiles,
                   others: Optional[Iterable[str]] = None) -> RigidityVerdict:
    """Root is rigid when nothing outside its component reaches it and every other candidate is excluded."""
    if others is None:
        others = graph.roots()
    verdict = RigidityVerdict(
        root=root,
        dimension=nodes.dimension(root),
        rigid=False,
        reachable=sorted(graph.closure()[root], key=sort_key),
        dominated_by=graph.dominators(root),
    )
    for other in sorted(set(others) - {root}, key=sort_key):
        evidence = exclusion_evidence(nodes, other, root)
        if evidence is None:
            verdict.unexplained.append(other)
        else:
            verdict.evidence.append(evidence)
    verdict.rigid = not verdict.dominated_by and not verdict.unexplained
    if verdict.rigid:
        logger.info("%s is rigid (dimension %d)", root, verdict.dimension)
    else:
        logger.warning("%s not confirmed rigid: dominated by %s, unexplained %s",
                       root, verdict.dominated_by, verdict.unexplained)
    return verdict


def component_report(graph: DominanceGraph, nodes: NodeProfiles) -> ComponentReport:
    roots = graph.roots()
    verdicts = [rigidity_check(root, graph, nodes, roots) for root in roots]
    minimal = all(graph.unreached([r for r in roots if r != root]) for root in roots)
    unreached = graph.unreached(roots)
    cited = [e for e in graph.edges if not e.verified]
    # nodes the roots only reach through a citation
    coverage = [k for k in graph.restricted(lambda e: e.verified).unreached(roots) if k not in unreached]
    return ComponentReport(roots, verdicts, unreached, minimal, cited, coverage)


@dataclass(frozen=True)
class Distinction:
    first: str
    second: str
    field: Optional[str]
    values: Optional[tuple[str, str]] = None
    cited: Optional[str] = None
    identified_by: Optional[str] = None

    @property
    def separated(self) -> bool:
        return self.field is not None or self.cited is not None

    def to_dict(self) -> dict:
        data = {"first": self.first, "second": self.second, "separated": self.separated}
        if self.field is not None:
            data["field"] = self.field
            data["values"] = list(self.values)
        if self.cited is not None:
            data["cited"] = self.cited
        if self.identified_by is not None:
            data["identified_by"] = self.identified_by
        return data


def distinction_report(catalog: Catalog, profiles: ProfileCache, tables: tuple[str, ...] = ("2", "3")) -> list[Distinction]:
    """For each pair of rows of equal dimension, the first invariant that tells them apart."""
    cited = {frozenset(fact.separates): fact.reason for fact in catalog.cited}
    witnessed = {frozenset((w.source.label, w.target.label)): w.id for w in catalog.witnesses}
    rows = [e for e in catalog.entries.values() if e.table in tables]
    out = []
    for x, first in enumerate(rows):
        for second in rows[x + 1:]:
            if first.dim != second.dim:
                continue
            a, b = first.sample_ids()[0], second.sample_ids()[0]
            found = _first_difference(profiles.get(a), profiles.get(b))
            if found is None:
                found = _first_difference(profiles.get(a, with_cohomology=True),
                                          profiles.get(b, with_cohomology=True), ("h2_dim",))
            if found is not None:
                name, va, vb = found
                out.append(Distinction(first.label, second.label, name, (str(va), str(vb))))
                continue
            pair = frozenset((first.label, second.label))
            reason, witness = cited.get(pair), witnessed.get(pair)
            out.append(Distinction(first.label, second.label, None, cited=reason, identified_by=witness))
            if reason is None and witness is None:
                logger.warning("No invariant or cited fact separates %s and %s", first.label, second.label)
    return out


def _first_difference(a: InvariantProfile, b: InvariantProfile, fields: tuple[str, ...] = DISTINCTION_FIELDS):
    for name in fields:
        va, vb = a.field_value(name), b.field_value(name)
        if va != vb:
            return name, va, vb
    return None
