from __future__ import annotations

import shutil
from datetime import datetime

import pytest

from catalog.loader import data_dir, load_catalog, load_catalog_text
from catalog.models import Endpoint
from deformation.curves import CurveSpec, SpecialPoint
from deformation.edges import Edge, Provenance
from deformation.loader import CurveSet, load_curves
from report.components import NodeProfiles, exclusion_evidence
from report.graph import DominanceGraph, GraphError, Node, closure_of, sort_key
from report.output import ReportWriter, emit_dot, emit_json, graph_from_json
from report.runner import EXPECTED_ROOTS, PROPERTY_DEFAULTS, STAGES, Workbench, run_all
from scalars.errors import InputError

TOY = """
entries:
  - label: B
    dim: 2
    products:
      - {i: 1, j: 1, k: 2}
  - {label: Z2, dim: 2, products: []}
"""


def edge(source, target, provenance=Provenance.CURVE, ref="c", fixed=True) -> Edge:
    return Edge(source, target, provenance, ref=ref, fixed_source=fixed)


@pytest.fixture
def small_graph():
    """a <-> b -> c <- d"""
    graph = DominanceGraph()
    for key in "abcd":
        graph.add_node(Node(key, key))
    graph.add_edge(edge("a", "b", Provenance.ISOMORPHISM, "w"))
    graph.add_edge(edge("b", "a", Provenance.ISOMORPHISM, "w"))
    graph.add_edge(edge("b", "c"))
    graph.add_edge(edge("d", "c", Provenance.EXTERNAL, "cited", fixed=False))
    return graph


FAST_PROPERTIES = {"property_checks": {"matrices": 1, "cohomology_matrices": 0}}


@pytest.fixture(scope="module")
def shipped_run():
    return run_all(load_catalog(), load_curves(), config=FAST_PROPERTIES)


@pytest.fixture(scope="module")
def shipped_nodes(shipped_run):
    return NodeProfiles(shipped_run.graph, load_catalog())


class TestGraph:
    def test_closure_of(self):
        reach = closure_of({"a": {"b"}, "b": {"c"}})
        assert reach["a"] == {"a", "b", "c"}
        assert reach["c"] == {"c"}

    def test_components_and_roots(self, small_graph):
        assert small_graph.components() == [["a", "b"], ["c"], ["d"]]
        assert small_graph.roots() == ["a", "d"]

    def test_dominators(self, small_graph):
        assert small_graph.dominators("c") == ["a", "b", "d"]
        assert small_graph.dominators("a") == []

    def test_unreached(self, small_graph):
        assert small_graph.unreached(["a"]) == ["d"]
        assert small_graph.unreached(["a", "d"]) == []

    def test_unknown_node(self, small_graph):
        with pytest.raises(GraphError):
            small_graph.add_edge(edge("a", "zz"))

    def test_self_loop_ignored(self, small_graph):
        before = len(small_graph.edges)
        small_graph.add_edge(edge("c", "c"))
        assert len(small_graph.edges) == before

    def test_closure_recomputed_after_edge(self, small_graph):
        assert not small_graph.reaches("c", "d")
        small_graph.add_edge(edge("c", "d"))
        assert small_graph.reaches("a", "d")

    def test_restricted(self, small_graph):
        fixed = small_graph.restricted(lambda e: e.fixed_source)
        assert not fixed.reaches("d", "c")
        assert fixed.reaches("a", "c")

    def test_natural_sort(self):
        assert sorted(["J_10", "J_9", "J_21"], key=sort_key) == ["J_9", "J_10", "J_21"]


class TestOutput:
    def test_empty_dot(self):
        assert emit_dot(DominanceGraph()) == "digraph jorn5 {\n}\n"

    def test_dot_styles(self, small_graph):
        small_graph.add_node(Node("N_1", "F", kind="family"))
        dot = emit_dot(small_graph)
        assert '"d" -> "c" [style=dashed, color=gray40, tooltip="cited"];' in dot
        assert '"N_1" [shape=ellipse, style=bold];' in dot
        assert '"a" [shape=box];' in dot

    def test_cited_sum_drawn_dashed(self, small_graph):
        small_graph.add_edge(Edge("b", "d", Provenance.DIRECT_SUM, ref="s", fixed_source=True, cited=True))
        small_graph.add_edge(Edge("a", "d", Provenance.DIRECT_SUM, ref="v", fixed_source=True))
        dot = emit_dot(small_graph)
        assert '"b" -> "d" [style=dashed, color=gray40, tooltip="s"];' in dot
        assert '"a" -> "d" [style=dotted, tooltip="v"];' in dot

    def test_dot_without_scaling(self, small_graph):
        small_graph.add_edge(edge("d", "b", Provenance.SCALING, "t*I"))
        assert "t*I" in emit_dot(small_graph)
        assert "t*I" not in emit_dot(small_graph, include_scaling=False)

    def test_json_round_trip(self, small_graph):
        text = emit_json(small_graph)
        assert graph_from_json(text) == small_graph
        assert emit_json(graph_from_json(text)) == text

    def test_json_plain_data(self):
        assert emit_json({"b": 1, "a": [2]}) == '{\n  "a": [\n    2\n  ],\n  "b": 1\n}\n'

    def test_resolve_path_date(self):
        path = ReportWriter()._resolve_path("~/reports/{date}")
        assert datetime.now().strftime("%Y-%m-%d") in str(path)
        assert "~" not in str(path)

    def test_resolve_path_week(self):
        path = ReportWriter()._resolve_path("/tmp/{week}.json")
        year, week, _ = datetime.now().isocalendar()
        assert f"{year}-W{week:02d}" in str(path)

    def test_write(self, tmp_path):
        path = ReportWriter(str(tmp_path / "{date}")).write("graph.dot", "digraph jorn5 {\n}\n")
        assert path.parent.name == datetime.now().strftime("%Y-%m-%d")
        assert path.read_text().startswith("digraph")


class TestWorkbench:
    def test_unknown_stage(self):
        with pytest.raises(InputError):
            Workbench(load_catalog_text(TOY), CurveSet()).run(["identity", "nope"])

    def test_stage_order_follows_pipeline(self):
        report = Workbench(load_catalog_text(TOY), CurveSet()).run(["witnesses", "identity"])
        assert [s.name for s in report.stages] == ["identity", "witnesses"]
        assert report.exit_code == 0

    def test_curve_stage_reports_problems(self):
        spec = CurveSpec(
            id="c",
            source=Endpoint("B"),
            matrix=(("t", "0"), ("0", "1")),
            special_points=(SpecialPoint("0", Endpoint("Z2")),),
            defective="recorded as broken",
        )
        curves = CurveSet(curves={"c": spec}, failed=["bad.yaml"])
        report = Workbench(load_catalog_text(TOY), curves).run(["curves"])
        assert [(d.subject, d.field) for d in report.discrepancies] == [("bad.yaml", "load"), ("c", "defective")]
        assert report.exit_code == 1

    def test_changed_expectation_is_reported(self, tmp_path):
        shutil.copytree(data_dir(), tmp_path / "data")
        table = tmp_path / "data" / "catalog" / "table3.yaml"
        table.write_text(table.read_text().replace("h2_dim: 6}", "h2_dim: 7}"))
        report = run_all(load_catalog(str(tmp_path / "data")), CurveSet(), stages=["invariants"])
        assert [(d.subject, d.field, d.expected, d.actual) for d in report.discrepancies] == [
            ("J_19", "h2_dim", 7, 6)]
        assert report.exit_code == 1
        assert report.to_dict()["discrepancies"][0]["subject"] == "J_19"


VARIANCE = """
table: "3"
entries:
  - label: B
    dim: 2
    products:
      - {i: 1, j: 1, k: 2}
    expected:
      - values: {ann_dim: 2}
    variances:
      - {field: ann_dim, printed: 2, computed: COMPUTED, note: "misprint"}
"""


class TestVariances:
    def test_recorded_variance_is_not_a_failure(self):
        catalog = load_catalog_text(VARIANCE.replace("COMPUTED", "1"))
        report = run_all(catalog, CurveSet(), stages=["invariants"])
        assert report.exit_code == 0
        assert [v.to_dict() for v in report.variances] == [
            {"subject": "B", "field": "ann_dim", "printed": 2, "computed": 1, "note": "misprint"}]
        assert report.to_dict()["variances"][0]["subject"] == "B"
        assert "1 recorded variances: B ann_dim" in report.summary()

    def test_variance_with_other_value_still_fails(self):
        catalog = load_catalog_text(VARIANCE.replace("COMPUTED", "0"))
        report = run_all(catalog, CurveSet(), stages=["invariants"])
        assert [(d.subject, d.field, d.expected, d.actual) for d in report.discrepancies] == [
            ("B", "ann_dim", 2, 1)]
        assert report.variances == []


class TestProperties:
    def test_defaults(self):
        assert PROPERTY_DEFAULTS["matrices"] == 100
        assert PROPERTY_DEFAULTS["labels"] is None

    def test_every_row_by_default(self):
        config = {"property_checks": {"matrices": 4, "cohomology_matrices": 2}}
        report = run_all(load_catalog_text(TOY), CurveSet(), config=config, stages=["properties"])
        assert report.stages[0].checked == 2
        assert report.exit_code == 0

    def test_labels_restrict(self):
        config = {"property_checks": {"matrices": 2, "labels": ["B"]}}
        report = run_all(load_catalog_text(TOY), CurveSet(), config=config, stages=["properties"])
        assert report.stages[0].checked == 1
        assert report.ok


class TestShippedRun:
    def test_all_stages_pass(self, shipped_run):
        assert [s.name for s in shipped_run.stages] == list(STAGES)
        assert [d.to_dict() for d in shipped_run.discrepancies] == []
        assert shipped_run.exit_code == 0

    def test_components(self, shipped_run):
        components = shipped_run.components
        assert sorted(components.roots, key=sort_key) == sorted(EXPECTED_ROOTS, key=sort_key)
        assert components.confirmed
        assert {v.root: v.dimension for v in components.verdicts}["J_21"] == 22

    def test_family_root(self, shipped_run):
        assert shipped_run.graph.nodes["N_27"].is_family

    def test_zero_algebra_reached_from_every_node(self, shipped_run):
        graph = shipped_run.graph
        assert all(graph.reaches(key, "eps_25") for key in graph.nodes)

    def test_dot_lists_curve_edges(self, shipped_run):
        dot = emit_dot(shipped_run.graph)
        assert '"J_21" -> "J_18" [style=solid, tooltip="J21_J18"];' in dot
        assert '"J_4" -> "J_3" [style=dashed, color=gray40' in dot

    def test_citation_dependent_edges_are_listed(self, shipped_run):
        cited = shipped_run.components.cited_edges
        assert all(not e.verified for e in cited)
        sums = {(e.source, e.target) for e in cited if e.provenance is Provenance.DIRECT_SUM}
        assert sums == {("J_4", "J_3"), ("J_4", "J_1"), ("J_3", "J_2")}
        assert ("eps_1", "eps_2") in {(e.source, e.target) for e in cited}
        assert "cited_edges" in shipped_run.components.to_dict()
        assert "rest on citations" in shipped_run.components.summary()

    def test_report_json_is_deterministic(self, shipped_run):
        assert emit_json(shipped_run) == emit_json(shipped_run)
        assert emit_json(shipped_run).count('"ok": true') == len(STAGES) + 1

    def test_recorded_variances(self, shipped_run):
        assert [(v.subject, v.variance.field) for v in shipped_run.variances] == [
            ("eps_2", "aut_dim"), ("eps_2", "ann_dim"), ("J_24_0", "h2_dim")]

    def test_properties_cover_every_sample(self, shipped_run):
        stage = next(s for s in shipped_run.stages if s.name == "properties")
        assert stage.checked == len(load_catalog().sample_ids())


class TestEvidence:
    def test_family_dimension(self, shipped_nodes):
        assert shipped_nodes.dimension("N_27") == 21

    def test_equal_orbit_dimensions_have_evidence(self, shipped_nodes):
        evidence = exclusion_evidence(shipped_nodes, "J_22", "J_40")
        assert evidence is not None

