from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from catalog.models import AlgebraId, Catalog, CatalogEntry, CatalogError
from catalog.witnesses import WitnessResult, verify_all_witnesses
from deformation.curves import ZERO_ALGEBRA, CurveResult, scaling_edge, verify_curve_all
from deformation.direct_sum import derive_direct_sum_edges
from deformation.edges import Edge, Provenance
from deformation.loader import CurveSet
from scalars.errors import InputError, Jorn5Error
from scalars.parser import format_scalar

logger = logging.getLogger(__name__)

NODE_TABLES = ("2", "3")


class GraphError(Jorn5Error):
    pass


def sort_key(key: str) -> tuple:
    """Natural order: J_9 before J_10."""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", key))


@dataclass(frozen=True)
class Node:
    key: str
    label: str
    kind: str = "algebra"
    table: str = ""
    params: tuple[tuple[str, str], ...] = ()

    @property
    def is_family(self) -> bool:
        return self.kind == "family"

    def algebra_id(self) -> AlgebraId:
        return AlgebraId.of(self.label, dict(self.params))

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "label": self.label,
            "kind": self.kind,
            "table": self.table,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> Node:
        return cls(
            key=data["key"],
            label=data["label"],
            kind=data.get("kind", "algebra"),
            table=str(data.get("table", "")),
            params=tuple((str(k), str(v)) for k, v in (data.get("params") or {}).items()),
        )


def closure_of(adjacency: Mapping[str, Iterable[str]]) -> dict[str, frozenset[str]]:
    """Reflexive-transitive closure of a successor map."""
    nodes = set(adjacency)
    for targets in adjacency.values():
        nodes.update(targets)
    reach = {}
    for start in nodes:
        seen = {start}
        queue = deque([start])
        while queue:
            for nxt in adjacency.get(queue.popleft(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        reach[start] = frozenset(seen)
    return reach


class DominanceGraph:
    """Nodes are catalog algebras and family unions; edges carry their provenance."""

    def __init__(self):
        self.nodes: dict[str, Node] = {}
        self._edges: dict[tuple, Edge] = {}
        self._closure: Optional[dict[str, frozenset[str]]] = None

    @property
    def edges(self) -> list[Edge]:
        return sorted(self._edges.values(), key=lambda e: (sort_key(e.source), sort_key(e.target), e.key))

    def add_node(self, node: Node) -> Node:
        existing = self.nodes.get(node.key)
        if existing is not None:
            return existing
        self.nodes[node.key] = node
        self._closure = None
        return node

    def add_algebra(self, algebra: AlgebraId, entry: CatalogEntry) -> Node:
        params = tuple((name, format_scalar(value)) for name, value in algebra.params)
        return self.add_node(Node(algebra.key, algebra.label, "algebra", entry.table, params))

    def add_family(self, entry: CatalogEntry) -> Node:
        return self.add_node(Node(entry.family_node, entry.label, "family", entry.table))

    def add_edge(self, edge: Edge) -> None:
        for end in (edge.source, edge.target):
            if end not in self.nodes:
                raise GraphError(f"Edge {edge.source} -> {edge.target} ({edge.ref}): unknown node {end}")
        if edge.source == edge.target:
            return
        self._edges.setdefault(edge.key, edge)
        self._closure = None

    def adjacency(self, keep: Optional[Callable[[Edge], bool]] = None) -> dict[str, set[str]]:
        adjacency: dict[str, set[str]] = {key: set() for key in self.nodes}
        for edge in self._edges.values():
            if keep is None or keep(edge):
                adjacency[edge.source].add(edge.target)
        return adjacency

    def closure(self) -> dict[str, frozenset[str]]:
        if self._closure is None:
            self._closure = closure_of(self.adjacency())
        return self._closure

    def reaches(self, source: str, target: str) -> bool:
        return target in self.closure()[source]

    def restricted(self, keep: Callable[[Edge], bool]) -> DominanceGraph:
        graph = DominanceGraph()
        graph.nodes = dict(self.nodes)
        graph._edges = {k: e for k, e in self._edges.items() if keep(e)}
        return graph

    def components(self) -> list[list[str]]:
        """Strongly connected components, each sorted, in node order."""
        reach = self.closure()
        seen: set[str] = set()
        groups = []
        for key in sorted(self.nodes, key=sort_key):
            if key in seen:
                continue
            group = sorted((k for k in reach[key] if key in reach[k]), key=sort_key)
            seen.update(group)
            groups.append(group)
        return groups

    def roots(self) -> list[str]:
        """One representative per component that nothing outside it reaches."""
        reach = self.closure()
        roots = []
        for group in self.components():
            members = set(group)
            if not any(members & reach[other] for other in self.nodes if other not in members):
                roots.append(group[0])
        return roots

    def dominators(self, key: str) -> list[str]:
        reach = self.closure()
        return sorted(
            (other for other in self.nodes if other != key and key in reach[other] and other not in reach[key]),
            key=sort_key,
        )

    def unreached(self, roots: Iterable[str]) -> list[str]:
        reach = self.closure()
        covered: set[str] = set()
        for root in roots:
            covered |= reach[root]
        return sorted((k for k in self.nodes if k not in covered), key=sort_key)

    def to_dict(self) -> dict:
        reach = self.closure()
        return {
            "nodes": [self.nodes[k].to_dict() for k in sorted(self.nodes, key=sort_key)],
            "edges": [e.to_dict() for e in self.edges],
            "closure": {k: sorted(reach[k], key=sort_key) for k in sorted(self.nodes, key=sort_key)},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> DominanceGraph:
        graph = cls()
        for raw in data.get("nodes") or ():
            graph.add_node(Node.from_dict(raw))
        for raw in data.get("edges") or ():
            graph.add_edge(Edge.from_dict(raw))
        return graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DominanceGraph):
            return NotImplemented
        return self.nodes == other.nodes and set(self._edges) == set(other._edges)

    def __len__(self) -> int:
        return len(self.nodes)


def _lifted(catalog: Catalog, label: str, varies: bool) -> Optional[str]:
    entry = catalog.get(label)
    return entry.family_node if varies and entry.family_node else None


def _add_curve_result(graph: DominanceGraph, catalog: Catalog, curves: CurveSet, result: CurveResult) -> None:
    curve = curves.get(result.curve_id)
    source_entry = catalog.get(curve.source.label)
    if curve.transversal:
        graph.add_family(source_entry)
    else:
        graph.add_algebra(catalog.resolve(curve.source, result.bindings), source_entry)
    lifted_source = result.source
    if not curve.transversal:
        lifted_source = _lifted(catalog, curve.source.label, curve.source.varies()) or result.source
    for point, edge in zip(curve.special_points, result.edges):
        target_entry = catalog.get(point.target.label)
        graph.add_algebra(catalog.resolve(point.target, result.bindings), target_entry)
        graph.add_edge(edge)
        lifted_target = _lifted(catalog, point.target.label, point.target.varies()) or edge.target
        if (lifted_source, lifted_target) != (edge.source, edge.target):
            if lifted_target != edge.target:
                graph.add_family(target_entry)
            graph.add_edge(Edge(lifted_source, lifted_target, Provenance.CURVE, ref=curve.id,
                                detail={"lifted": "family"}))


def build_graph(catalog: Catalog, curves: CurveSet,
                curve_results: Optional[list[CurveResult]] = None,
                witness_results: Optional[list[WitnessResult]] = None,
                zero_label: str = ZERO_ALGEBRA) -> DominanceGraph:
    """Assemble nodes and every verified or cited edge, then close."""
    graph = DominanceGraph()
    for entry in catalog.entries.values():
        if entry.table not in NODE_TABLES:
            continue
        for algebra in entry.sample_ids():
            graph.add_algebra(algebra, entry)
        if entry.family_node:
            graph.add_family(entry)

    if curve_results is None:
        curve_results = []
        for curve in curves.active():
            try:
                curve_results.extend(verify_curve_all(catalog, curve))
            except InputError as e:
                raise CatalogError(f"{curve.id}: {e}") from e
    for result in curve_results:
        _add_curve_result(graph, catalog, curves, result)

    for entry in catalog.entries.values():
        if entry.family_node and entry.family_node in graph.nodes:
            for node in list(graph.nodes.values()):
                if node.kind == "algebra" and node.label == entry.label:
                    graph.add_edge(Edge(entry.family_node, node.key, Provenance.MEMBERSHIP, ref=entry.label))

    if witness_results is None:
        witness_results = verify_all_witnesses(catalog)
    for result in witness_results:
        if result.ok and result.source.key in graph.nodes and result.target.key in graph.nodes:
            graph.add_edge(Edge(result.source.key, result.target.key, Provenance.ISOMORPHISM, ref=result.witness_id))
            graph.add_edge(Edge(result.target.key, result.source.key, Provenance.ISOMORPHISM, ref=result.witness_id))

    external = curves.external_edges()
    for edge in external:
        if edge.source in graph.nodes and edge.target in graph.nodes:
            graph.add_edge(edge)
    for edge in derive_direct_sum_edges(catalog, external):
        if edge.source in graph.nodes and edge.target in graph.nodes:
            graph.add_edge(edge)

    if zero_label in graph.nodes:
        for node in list(graph.nodes.values()):
            if node.kind == "algebra" and node.key != zero_label:
                graph.add_edge(scaling_edge(catalog, node.algebra_id(), zero_label))

    logger.info("Built dominance graph: %d nodes, %d edges", len(graph.nodes), len(graph.edges))
    return graph
