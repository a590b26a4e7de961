from __future__ import annotations

import logging
from typing import Iterable, Optional

from catalog.models import Catalog, CatalogEntry, Endpoint
from deformation.curves import CurveSpec, SpecialPoint, identity_curve, verify_curve
from deformation.edges import Edge, Provenance
from scalars.errors import InputError

logger = logging.getLogger(__name__)


class DirectSumError(InputError):
    pass


def find_sum(catalog: Catalog, summands: tuple[str, ...]) -> Optional[CatalogEntry]:
    for entry in catalog.entries.values():
        if entry.summands == summands:
            return entry
    return None


def identity_edge(catalog: Catalog, label: str) -> tuple[Edge, CurveSpec]:
    curve = identity_curve(Endpoint(label), catalog.get(label).dim)
    edge = Edge(label, label, Provenance.CURVE, ref=curve.id, fixed_source=True)
    return edge, curve


def block_curve(curve_id: str, source: str, target: str, first: CurveSpec, second: CurveSpec) -> CurveSpec:
    n1, n2 = len(first.matrix), len(second.matrix)
    rows = [tuple(row) + ("0",) * n2 for row in first.matrix]
    rows += [("0",) * n1 + tuple(row) for row in second.matrix]
    return CurveSpec(
        id=curve_id,
        source=Endpoint(source),
        matrix=tuple(rows),
        special_points=(SpecialPoint("0", Endpoint(target)),),
    )


def _plain(curve: Optional[CurveSpec]) -> bool:
    """Fixed source, single limit at 0, no witness and no free parameters."""
    if curve is None or curve.transversal or curve.free_params or curve.source.params:
        return False
    return len(curve.special_points) == 1 and curve.special_points[0].t0 == "0" \
        and curve.special_points[0].limit_witness is None and not curve.special_points[0].target.params


def derive_direct_sum_edge(catalog: Catalog, first: Edge, second: Edge,
                           first_curve: Optional[CurveSpec] = None,
                           second_curve: Optional[CurveSpec] = None) -> Edge:
    """A1 -> B1 and A2 -> B2 give A1+A2 -> B1+B2 between the catalog rows declared as those sums.

    When both inputs come with plain curves, the block-diagonal curve is verified too.
    """
    source = find_sum(catalog, (first.source, second.source))
    target = find_sum(catalog, (first.target, second.target))
    if source is None or target is None:
        missing = (first.source, second.source) if source is None else (first.target, second.target)
        raise DirectSumError(f"No catalog row is declared as {' + '.join(missing)}")
    dims = [catalog.get(label).dim for label in (first.source, second.source)]
    if sum(dims) != source.dim or catalog.get(first.target).dim != dims[0] \
            or catalog.get(second.target).dim != dims[1]:
        raise DirectSumError(f"Summand dimensions {dims} do not fit {source.label} -> {target.label}")

    ref = f"{first.ref} + {second.ref}"
    if _plain(first_curve) and _plain(second_curve):
        verify_curve(catalog, block_curve(f"sum:{source.label}->{target.label}", source.label,
                                          target.label, first_curve, second_curve))
        logger.debug("Re-verified %s -> %s as a block curve", source.label, target.label)
    return Edge(
        source.label,
        target.label,
        Provenance.DIRECT_SUM,
        ref=ref,
        fixed_source=True,
        cited=not (first.verified and second.verified),
        detail={"summands": f"{first.source}->{first.target} + {second.source}->{second.target}"},
    )


def derive_direct_sum_edges(catalog: Catalog, edges: Iterable[Edge]) -> list[Edge]:
    """Extend each small edge by the identity on the other summand of every two-term sum row."""
    derived = []
    for edge in edges:
        if edge.source not in catalog.entries or edge.target not in catalog.entries:
            continue
        for entry in catalog.entries.values():
            if len(entry.summands) != 2 or entry.summands[0] != edge.source:
                continue
            rest = entry.summands[1]
            if find_sum(catalog, (edge.target, rest)) is None:
                continue
            ident, curve = identity_edge(catalog, rest)
            derived.append(derive_direct_sum_edge(catalog, edge, ident, None, curve))
    return derived
