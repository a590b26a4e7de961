from report.components import (
    ComponentReport,
    Distinction,
    Evidence,
    NodeProfiles,
    RigidityVerdict,
    component_report,
    distinction_report,
    rigidity_check,
)
from report.graph import DominanceGraph, GraphError, Node, build_graph, closure_of
from report.output import ReportWriter, emit_dot, emit_json, graph_from_json
from report.runner import STAGES, Discrepancy, RunReport, StageResult, Workbench, run_all

__all__ = [
    "ComponentReport",
    "Discrepancy",
    "Distinction",
    "DominanceGraph",
    "Evidence",
    "GraphError",
    "Node",
    "NodeProfiles",
    "ReportWriter",
    "RigidityVerdict",
    "RunReport",
    "STAGES",
    "StageResult",
    "Workbench",
    "build_graph",
    "closure_of",
    "component_report",
    "distinction_report",
    "emit_dot",
    "emit_json",
    "graph_from_json",
    "rigidity_check",
    "run_all",
]
