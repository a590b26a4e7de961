from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from algebra.tensor import StructureTensor, apply_basis_change, basis_change_det, scale_matrix, tensor_diff
from catalog.models import AlgebraId, Catalog, Endpoint, expand_free_params
from deformation.edges import Edge, Provenance
from scalars.errors import PoleError, VerificationError
from scalars.field import ExactScalar
from scalars.parser import format_scalar, parse_constant, parse_scalar_expr
from scalars.poly import RatFunc

logger = logging.getLogger(__name__)

GENERIC_DET_SAMPLES = 3
ZERO_ALGEBRA = "eps_25"


class CurveVerificationError(VerificationError):
    def __init__(self, curve_id: str, message: str):
        super().__init__(f"{curve_id}: {message}")
        self.curve_id = curve_id


class SingularCurveError(CurveVerificationError):
    pass


class CurvePoleError(CurveVerificationError):
    def __init__(self, curve_id: str, t0, entry: tuple[int, int, int]):
        i, j, k = entry
        super().__init__(curve_id, f"n{i}n{j}[n{k}] has a pole at t = {format_scalar(t0)}")
        self.t0 = t0
        self.entry = entry


class LimitMismatchError(CurveVerificationError):
    def __init__(self, curve_id: str, target: str, diff: list):
        i, j, k, got, want = diff[0]
        super().__init__(
            curve_id,
            f"limit differs from {target} in {len(diff)} entries, first n{i}n{j}[n{k}]: {got} != {want}",
        )
        self.target = target
        self.diff = diff


@dataclass(frozen=True)
class SpecialPoint:
    t0: str
    target: Endpoint
    limit_witness: Optional[tuple[tuple[str, ...], ...]] = None


@dataclass(frozen=True)
class CurveSpec:
    """A basis e_i(t) over a source row, optionally moving along a parameter path p(t)."""

    id: str
    source: Endpoint
    matrix: tuple[tuple[str, ...], ...]
    special_points: tuple[SpecialPoint, ...]
    free_params: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    expected_det: Optional[str] = None
    defective: Optional[str] = None
    replaces: Optional[str] = None
    note: Optional[str] = None

    @property
    def transversal(self) -> bool:
        return self.source.depends_on_t()

    def bindings(self) -> list[dict[str, ExactScalar]]:
        return expand_free_params(self.free_params)


@dataclass
class CurveResult:
    curve_id: str
    bindings: dict[str, ExactScalar]
    source: str
    det: RatFunc
    edges: list[Edge] = field(default_factory=list)


def parse_matrix(rows: Sequence[Sequence[str]], bindings: Mapping[str, object]) -> list[list[RatFunc]]:
    return [[parse_scalar_expr(x, bindings) for x in row] for row in rows]


def check_generic_det(curve_id: str, det: RatFunc, needed: int = GENERIC_DET_SAMPLES) -> list[Fraction]:
    """Rational t at which det is defined and nonzero; at least `needed` of them."""
    found = []
    for n in range(1, 64):
        for point in (Fraction(n), Fraction(1, n + 1)):
            try:
                value = det.evaluate(point)
            except PoleError:
                continue
            if not value.is_zero():
                found.append(point)
            if len(found) >= needed:
                return found
    raise SingularCurveError(curve_id, f"det = {det} is nonzero at only {len(found)} sampled t")


def limit_at(tensor: StructureTensor, t0, curve_id: str) -> StructureTensor:
    """Entrywise value at t0; a pole in any structure constant is an error."""
    if tensor.domain is not RatFunc:
        return tensor
    n = tensor.dim
    c = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                try:
                    c[i][j][k] = tensor.c[i][j][k].evaluate(t0)
                except PoleError:
                    raise CurvePoleError(curve_id, t0, (i + 1, j + 1, k + 1)) from None
    return StructureTensor(n, c, ExactScalar)


def source_node(catalog: Catalog, curve: CurveSpec, bindings: Mapping[str, ExactScalar]) -> str:
    if curve.transversal:
        entry = catalog.get(curve.source.label)
        return entry.family_node or f"N({entry.label})"
    return catalog.resolve(curve.source, bindings).key


def verify_curve(catalog: Catalog, curve: CurveSpec,
                 bindings: Optional[Mapping[str, ExactScalar]] = None) -> CurveResult:
    """Verify every special point of the curve at one binding of its free parameters."""
    free = dict(bindings or {})
    entry = catalog.get(curve.source.label)
    path = curve.source.bind(free)
    source = entry.tensor(path)

    g = parse_matrix(curve.matrix, free)
    if len(g) != entry.dim:
        raise CurveVerificationError(curve.id, f"matrix has {len(g)} rows, source dimension is {entry.dim}")
    det = basis_change_det(g)
    if det.is_zero():
        raise SingularCurveError(curve.id, "det is identically zero")
    if curve.expected_det is not None:
        expected = parse_scalar_expr(curve.expected_det, free)
        if det != expected:
            raise CurveVerificationError(curve.id, f"det = {det}, expected {expected}")
    check_generic_det(curve.id, det)

    moving = apply_basis_change(source, g)
    result = CurveResult(curve.id, free, source_node(catalog, curve, free), det)
    for point in curve.special_points:
        t0 = parse_constant(point.t0, free)
        limit = limit_at(moving, t0, curve.id)
        if point.limit_witness is not None:
            limit = apply_basis_change(limit, [[parse_constant(x, free) for x in row]
                                               for row in point.limit_witness])
        target = catalog.resolve(point.target, free)
        diff = tensor_diff(limit, catalog.instantiate(target))
        if diff:
            raise LimitMismatchError(curve.id, target.key, diff)
        result.edges.append(Edge(
            source=result.source,
            target=target.key,
            provenance=Provenance.CURVE,
            ref=curve.id,
            fixed_source=not curve.transversal,
            detail={"t0": format_scalar(t0), "bindings": _show(free)},
        ))
    logger.debug("Curve %s verified at %s", curve.id, _show(free))
    return result


def verify_curve_all(catalog: Catalog, curve: CurveSpec) -> list[CurveResult]:
    return [verify_curve(catalog, curve, bindings) for bindings in curve.bindings()]


def scaling_edge(catalog: Catalog, algebra: AlgebraId, zero_label: str = ZERO_ALGEBRA) -> Edge:
    """The curve t*I contracts every product to zero."""
    tensor = catalog.instantiate(algebra)
    moving = apply_basis_change(tensor, scale_matrix(tensor.dim, RatFunc.t()))
    ref = f"scaling:{algebra.key}"
    diff = tensor_diff(limit_at(moving, ExactScalar.zero(), ref), StructureTensor.zero_algebra(tensor.dim))
    if diff:
        raise LimitMismatchError(ref, zero_label, diff)
    return Edge(algebra.key, zero_label, Provenance.SCALING, ref="t*I", fixed_source=True)


def identity_curve(endpoint: Endpoint, dim: int) -> CurveSpec:
    rows = tuple(tuple("1" if i == j else "0" for j in range(dim)) for i in range(dim))
    return CurveSpec(
        id=f"identity:{endpoint.label}",
        source=endpoint,
        matrix=rows,
        special_points=(SpecialPoint("0", endpoint),),
    )


def _show(bindings: Mapping[str, ExactScalar]) -> str:
    return ", ".join(f"{k}={format_scalar(v)}" for k, v in bindings.items())
