from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Mapping, Optional, Sequence

from algebra.cohomology import CoboundaryRankError, coboundary_dim
from algebra.identities import is_associative, is_jordan
from algebra.invariants import invariant_profile
from algebra.sampling import random_invertible
from algebra.tensor import apply_basis_change, compose, tensors_equal
from catalog.models import AlgebraId, Catalog, Variance
from catalog.profiles import ProfileCache
from catalog.witnesses import WitnessResult, verify_all_witnesses
from deformation.curves import ZERO_ALGEBRA, CurveResult, CurveSpec, CurveVerificationError, verify_curve
from deformation.edges import Provenance
from deformation.loader import CurveSet
from deformation.obstructions import ObstructionReport, check_obstructions, obstruction_matrix
from report.components import ComponentReport, Distinction, NodeProfiles, component_report, distinction_report
from report.graph import DominanceGraph, build_graph, sort_key
from scalars.errors import InputError, Jorn5Error
from scalars.parser import format_scalar

logger = logging.getLogger(__name__)

STAGES = (
    "identity",
    "invariants",
    "distinctions",
    "witnesses",
    "obstructions",
    "curves",
    "graph",
    "rigidity",
    "properties",
)

EXPECTED_ROOTS = ("eps_1", "J_21", "J_22", "J_40", "N_27")

PROPERTY_DEFAULTS = {"seed": 20240501, "matrices": 100, "cohomology_matrices": 1, "max_entry": 2, "labels": None}


@dataclass(frozen=True)
class Discrepancy:
    stage: str
    subject: str
    field: str
    expected: Any
    actual: Any

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "subject": self.subject,
            "field": self.field,
            "expected": _plain(self.expected),
            "actual": _plain(self.actual),
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return str(value)


@dataclass(frozen=True)
class RecordedVariance:
    subject: str
    variance: Variance

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "field": self.variance.field,
            "printed": _plain(self.variance.printed),
            "computed": _plain(self.variance.computed),
            "note": self.variance.note,
        }


@dataclass
class StageResult:
    name: str
    checked: int = 0
    discrepancies: list[Discrepancy] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def fail(self, subject: str, name: str, expected: Any, actual: Any) -> None:
        item = Discrepancy(self.name, subject, name, expected, actual)
        logger.warning("[%s] %s: %s expected %s, got %s", self.name, subject, name, expected, actual)
        self.discrepancies.append(item)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "ok": self.ok,
            "discrepancies": [d.to_dict() for d in self.discrepancies],
            "notes": self.notes,
        }


@dataclass
class RunReport:
    stages: list[StageResult] = field(default_factory=list)
    graph: Optional[DominanceGraph] = None
    components: Optional[ComponentReport] = None
    distinctions: list[Distinction] = field(default_factory=list)
    obstructions: dict[tuple[str, str], ObstructionReport] = field(default_factory=dict)
    variances: list[RecordedVariance] = field(default_factory=list)

    @property
    def discrepancies(self) -> list[Discrepancy]:
        return [d for stage in self.stages for d in stage.discrepancies]

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def summary(self) -> str:
        lines = [f"{s.name}: {'ok' if s.ok else 'FAILED'} ({s.checked} checked, "
                 f"{len(s.discrepancies)} discrepancies)" for s in self.stages]
        if self.variances:
            lines.append(f"{len(self.variances)} recorded variances: "
                         + ", ".join(f"{v.subject} {v.variance.field}" for v in self.variances))
        if self.components is not None:
            lines.append(self.components.summary())
        return "\n".join(lines)

    def to_dict(self) -> dict:
        data: dict[str, Any] = {
            "ok": self.ok,
            "stages": [s.to_dict() for s in self.stages],
            "discrepancies": [d.to_dict() for d in self.discrepancies],
        }
        if self.components is not None:
            data["components"] = self.components.to_dict()
        if self.variances:
            data["variances"] = [v.to_dict() for v in self.variances]
        if self.distinctions:
            data["distinctions"] = [d.to_dict() for d in self.distinctions]
        if self.obstructions:
            data["obstructions"] = {
                "pairs": len(self.obstructions),
                "blocked": sum(1 for r in self.obstructions.values() if r.blocked),
            }
        return data


class Workbench:
    """Runs the verification stages over one loaded catalog and curve set."""

    def __init__(self, catalog: Catalog, curves: CurveSet, config: Optional[Mapping] = None):
        self.catalog = catalog
        self.curves = curves
        self.config = dict(config or {})
        self.profiles = ProfileCache(catalog)
        self.report = RunReport()
        self.curve_results: Optional[list[CurveResult]] = None
        self.witness_results: Optional[list[WitnessResult]] = None

    def run(self, stages: Optional[Iterable[str]] = None) -> RunReport:
        selected = list(stages or self.config.get("stages") or STAGES)
        unknown = [s for s in selected if s not in STAGES]
        if unknown:
            raise InputError(f"Unknown stage(s): {', '.join(unknown)}")
        for name in STAGES:
            if name not in selected:
                continue
            result = StageResult(name)
            getattr(self, f"stage_{name}")(result)
            logger.info("Stage %s: %d checked, %d discrepancies", name, result.checked, len(result.discrepancies))
            self.report.stages.append(result)
        return self.report

    def _node_ids(self) -> list[AlgebraId]:
        return self.catalog.sample_ids(tables=("2", "3"))

    def stage_identity(self, result: StageResult) -> None:
        for entry in self.catalog.entries.values():
            for algebra in entry.sample_ids():
                tensor = self.catalog.instantiate(algebra)
                result.checked += 1
                if not tensor.is_commutative():
                    result.fail(algebra.key, "commutative", True, False)
                if not is_jordan(tensor):
                    result.fail(algebra.key, "jordan", True, False)
                if entry.table in ("2", "3"):
                    associative = is_associative(tensor)
                    if associative != (entry.table == "2"):
                        result.fail(algebra.key, "associative", entry.table == "2", associative)

    def stage_invariants(self, result: StageResult) -> None:
        for algebra in self._node_ids():
            expected = self.catalog.expected_invariants(algebra)
            if not expected:
                continue
            profile = self.profiles.get(algebra, with_cohomology="h2_dim" in expected)
            result.checked += 1
            for name, want in expected.items():
                got = profile.field_value(name)
                if isinstance(got, tuple):
                    want = tuple(want)
                if got == want:
                    continue
                variance = self.catalog.get(algebra.label).variance_for(name, want)
                if variance is not None and variance.explains(got):
                    self.report.variances.append(RecordedVariance(algebra.key, variance))
                    result.notes.append(f"{algebra.key}: {name} printed {want}, computed {got} (recorded)")
                else:
                    result.fail(algebra.key, name, want, got)

    def stage_distinctions(self, result: StageResult) -> None:
        self.report.distinctions = distinction_report(self.catalog, self.profiles)
        result.checked = len(self.report.distinctions)
        for item in self.report.distinctions:
            if not item.separated and item.identified_by is None:
                result.notes.append(f"{item.first} and {item.second} are not separated")

    def stage_witnesses(self, result: StageResult) -> None:
        self.witness_results = verify_all_witnesses(self.catalog)
        for item in self.witness_results:
            result.checked += 1
            if not item.ok:
                result.fail(f"{item.witness_id} {item.source} -> {item.target}", "tensor", "equal", item.describe())

    def stage_obstructions(self, result: StageResult) -> None:
        self.report.obstructions = obstruction_matrix(self.catalog, self._node_ids(), self.profiles)
        result.checked = len(self.report.obstructions)
        blocked = sum(1 for r in self.report.obstructions.values() if r.blocked)
        result.notes.append(f"{blocked} of {result.checked} ordered pairs blocked")

    def stage_curves(self, result: StageResult) -> None:
        self.curve_results = []
        for name in self.curves.failed:
            result.fail(name, "load", "loaded", "unreadable curve file")
        for curve in self.curves.curves.values():
            if curve.replaces and curve.replaces not in self.curves.curves:
                result.fail(curve.id, "replaces", curve.replaces, "unknown curve")
            for bindings in curve.bindings():
                result.checked += 1
                subject = f"{curve.id} at {_show(bindings)}" if bindings else curve.id
                try:
                    verified = verify_curve(self.catalog, curve, bindings)
                except CurveVerificationError as e:
                    if curve.defective:
                        result.notes.append(f"{subject} fails as recorded: {e}")
                    else:
                        result.fail(subject, type(e).__name__, "verified", str(e))
                    continue
                except InputError as e:
                    result.fail(subject, "input", "valid", str(e))
                    continue
                if curve.defective:
                    result.fail(subject, "defective", "failure", "verified")
                    continue
                self.curve_results.append(verified)
                if not curve.transversal:
                    self._check_fixed_source(result, curve, bindings)

    def _check_fixed_source(self, result: StageResult, curve: CurveSpec, bindings: Mapping) -> None:
        """A curve from a fixed algebra must respect every necessary condition, strict aut growth included."""
        source = self.catalog.resolve(curve.source, bindings)
        for point in curve.special_points:
            target = self.catalog.resolve(point.target, bindings)
            report = check_obstructions(self.catalog, source, target, self.profiles)
            if report.blocked:
                result.fail(f"{curve.id}: {source.key} -> {target.key}", "obstruction",
                            "not blocked", report.describe())

    def stage_graph(self, result: StageResult) -> None:
        try:
            graph = build_graph(self.catalog, self.curves, self.curve_results, self.witness_results)
        except Jorn5Error as e:
            result.fail("graph", "build", "built", str(e))
            return
        self.report.graph = graph
        result.checked = len(graph.edges)
        zero = ZERO_ALGEBRA
        if zero in graph.nodes:
            missing = [k for k in graph.nodes if not graph.reaches(k, zero)]
            if missing:
                result.fail(zero, "reached_from", "every node", missing)

        fixed = graph.restricted(lambda e: e.fixed_source and e.provenance in (
            Provenance.CURVE, Provenance.SCALING, Provenance.DIRECT_SUM))
        reach = fixed.closure()
        for source in sorted(reach, key=sort_key):
            if graph.nodes[source].is_family:
                continue
            for target in sorted(reach[source], key=sort_key):
                if target == source or graph.nodes[target].is_family:
                    continue
                report = check_obstructions(self.catalog, graph.nodes[source].algebra_id(),
                                            graph.nodes[target].algebra_id(), self.profiles)
                if report.blocked:
                    result.fail(f"{source} -> {target}", "closure", "not blocked", report.describe())

    def stage_rigidity(self, result: StageResult) -> None:
        if self.report.graph is None:
            self.stage_graph(StageResult("graph"))
        graph = self.report.graph
        if graph is None:
            result.fail("graph", "available", "built", "missing")
            return
        components = component_report(graph, NodeProfiles(graph, self.catalog, self.profiles))
        self.report.components = components
        result.checked = len(components.roots)
        expected = list(self.config.get("expected_components") or EXPECTED_ROOTS)
        if sorted(components.roots, key=sort_key) != sorted(expected, key=sort_key):
            result.fail("roots", "set", expected, components.roots)
        if components.unreached:
            result.fail("roots", "unreached", [], components.unreached)
        if not components.minimal:
            result.fail("roots", "minimal", True, False)
        for verdict in components.verdicts:
            if not verdict.rigid:
                result.fail(verdict.root, "rigid", True,
                            {"dominated_by": verdict.dominated_by, "unexplained": verdict.unexplained})
        result.notes.append(components.summary())

    def stage_properties(self, result: StageResult) -> None:
        """Basis-change invariance, the composition law and dim B^2 = n^2 - dim Der on every sample."""
        settings = {**PROPERTY_DEFAULTS, **(self.config.get("property_checks") or {})}
        rng = random.Random(settings["seed"])
        labels = settings.get("labels")
        algebras = [a for a in self.catalog.sample_ids() if not labels or a.label in labels]
        for algebra in algebras:
            tensor = self.catalog.instantiate(algebra)
            try:
                base = self.profiles.get(algebra, with_cohomology=settings["cohomology_matrices"] > 0)
            except CoboundaryRankError as e:
                result.fail(algebra.key, "b2_dim", "n^2 - dim Der", str(e))
                continue
            plain = replace(base, h2_dim=None, z2_dim=None, b2_dim=None)
            result.checked += 1
            b2 = base.b2_dim if base.b2_dim is not None else coboundary_dim(tensor)
            if b2 != tensor.dim ** 2 - base.der_dim:
                result.fail(algebra.key, "b2_dim", tensor.dim ** 2 - base.der_dim, b2)
            for n in range(settings["matrices"]):
                g = random_invertible(tensor.dim, rng, settings["max_entry"])
                h = random_invertible(tensor.dim, rng, settings["max_entry"])
                moved = apply_basis_change(tensor, g)
                with_h2 = n < settings["cohomology_matrices"]
                try:
                    profile = invariant_profile(moved, with_cohomology=with_h2)
                except CoboundaryRankError as e:
                    result.fail(algebra.key, "b2_dim", "n^2 - dim Der", str(e))
                    break
                expected = base if with_h2 else plain
                if profile != expected:
                    result.fail(algebra.key, "basis_invariance", expected.to_dict(), profile.to_dict())
                if not tensors_equal(apply_basis_change(moved, h), apply_basis_change(tensor, compose(g, h))):
                    result.fail(algebra.key, "composition", "equal", "different")
        result.notes.append(f"{settings['matrices']} random matrices per algebra")


def _show(bindings: Mapping) -> str:
    return ", ".join(f"{k}={format_scalar(v)}" for k, v in bindings.items())


def run_all(catalog: Catalog, curves: CurveSet, config: Optional[Mapping] = None,
            stages: Optional[Sequence[str]] = None) -> RunReport:
    return Workbench(catalog, curves, config).run(stages)
