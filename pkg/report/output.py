from __future__ import annotations

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

from deformation.edges import Provenance
from report.graph import DominanceGraph, sort_key

logger = logging.getLogger(__name__)

EDGE_STYLES = {
    Provenance.CURVE: 'style=solid',
    Provenance.EXTERNAL: 'style=dashed, color=gray40',
    Provenance.DIRECT_SUM: 'style=dotted',
    Provenance.SCALING: 'style=dotted, color=gray70',
    Provenance.MEMBERSHIP: 'style=solid, color=gray50, arrowhead=empty',
    Provenance.ISOMORPHISM: 'style=solid, color=blue, dir=both',
}

# Derived edges that rest on a citation are drawn like the citation.
CITED_STYLE = EDGE_STYLES[Provenance.EXTERNAL]


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(graph: DominanceGraph, include_scaling: bool = True) -> str:
    """Graphviz digraph; edges styled by provenance."""
    lines = ["digraph jorn5 {"]
    for key in sorted(graph.nodes, key=sort_key):
        node = graph.nodes[key]
        shape = "ellipse, style=bold" if node.is_family else "box"
        lines.append(f"  {_quote(key)} [shape={shape}];")
    for edge in graph.edges:
        if edge.provenance is Provenance.SCALING and not include_scaling:
            continue
        style = EDGE_STYLES[edge.provenance] if edge.verified else CITED_STYLE
        attrs = f"{style}, tooltip={_quote(edge.ref)}"
        lines.append(f"  {_quote(edge.source)} -> {_quote(edge.target)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_json(obj: Any) -> str:
    """Deterministic JSON for a graph, report, or plain data."""
    data = obj.to_dict() if hasattr(obj, "to_dict") else obj
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def graph_from_json(text: str) -> DominanceGraph:
    return DominanceGraph.from_dict(json.loads(text))


class ReportWriter:
    """Writes report files under a directory template ({date} and {week} are expanded)."""

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = output_dir

    def write(self, name: str, content: str) -> Path:
        base = self._resolve_path(self.output_dir) if self.output_dir else Path.cwd()
        path = base / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
        logger.info("Saved report to %s", path)
        return path

    def _resolve_path(self, path_template: str) -> Path:
        now = datetime.now()
        path_str = path_template.replace("{date}", now.strftime("%Y-%m-%d"))

        # ISO week string
        year, week, _ = now.isocalendar()
        path_str = path_str.replace("{week}", f"{year}-W{week:02d}")

        return Path(path_str).expanduser()
