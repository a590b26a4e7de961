from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from catalog.loader import data_dir, data_files, free_params, matrix, require
from catalog.models import CatalogError, Endpoint
from deformation.curves import CurveSpec, SpecialPoint
from deformation.edges import ExternalSpec

logger = logging.getLogger(__name__)


@dataclass
class CurveSet:
    curves: dict[str, CurveSpec] = field(default_factory=dict)
    external: list[ExternalSpec] = field(default_factory=list)
    failed: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.curves)

    def get(self, curve_id: str) -> CurveSpec:
        try:
            return self.curves[curve_id]
        except KeyError:
            raise CatalogError(f"Unknown curve: {curve_id}") from None

    def active(self) -> list[CurveSpec]:
        """Curves expected to verify: everything not marked defective."""
        return [c for c in self.curves.values() if not c.defective]

    def defective(self) -> list[CurveSpec]:
        return [c for c in self.curves.values() if c.defective]

    def external_edges(self) -> list:
        return [edge for spec in self.external for edge in spec.edges()]


def _source(data: Any) -> Endpoint:
    if isinstance(data, str):
        return Endpoint(data)
    require(data, ["label"], "curve source")
    path = data.get("param_path") or data.get("params") or {}
    return Endpoint(str(data["label"]), {str(k): str(v) for k, v in path.items()})


def _target(data: Any) -> Endpoint:
    if isinstance(data, str):
        return Endpoint(data)
    require(data, ["label"], "curve target")
    return Endpoint(str(data["label"]), {str(k): str(v) for k, v in (data.get("params") or {}).items()})


def parse_curve(data: dict, source: str = "<string>") -> CurveSpec:
    where = f"{source}: curve {data.get('id', '?')}"
    require(data, ["id", "source", "matrix", "special_points"], where)
    points = []
    for raw in data["special_points"]:
        require(raw, ["t0", "target"], where)
        witness = raw.get("limit_witness")
        points.append(SpecialPoint(
            t0=str(raw["t0"]),
            target=_target(raw["target"]),
            limit_witness=matrix(witness, where) if witness else None,
        ))
    if not points:
        raise CatalogError(f"{where}: needs at least one special point")
    return CurveSpec(
        id=str(data["id"]),
        source=_source(data["source"]),
        matrix=matrix(data["matrix"], where),
        special_points=tuple(points),
        free_params=free_params(data.get("free_params")),
        expected_det=str(data["expected_det"]) if data.get("expected_det") is not None else None,
        defective=data.get("defective"),
        replaces=data.get("replaces"),
        note=data.get("note"),
    )


def parse_external(data: dict, source: str = "<string>") -> ExternalSpec:
    require(data, ["source", "citation"], f"{source}: external edge")
    targets = data.get("targets") or [data["target"]]
    return ExternalSpec(str(data["source"]), tuple(str(t) for t in targets), str(data["citation"]))


class CurveLoader:
    """Reads every curves/*.yaml; a broken file is logged and skipped."""

    def __init__(self, directory: Optional[str] = None):
        self.curves_dir = data_dir(directory) / "curves"
        self.failed: list[str] = []

    def load_all(self) -> CurveSet:
        curve_set = CurveSet()
        self.failed = []
        if not self.curves_dir.is_dir():
            logger.warning("Curve directory not found: %s", self.curves_dir)
            return curve_set
        for path in data_files(self.curves_dir):
            try:
                self._load_file(path, curve_set)
                logger.info("Loaded curve file: %s", path.name)
            except Exception:
                self.failed.append(path.name)
                curve_set.failed.append(path.name)
                logger.error("Failed to load curves from %s", path, exc_info=True)
        return curve_set

    def _load_file(self, path: Path, curve_set: CurveSet) -> None:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
        curves = [parse_curve(raw, path.name) for raw in data.get("curves") or ()]
        external = [parse_external(raw, path.name) for raw in data.get("external") or ()]
        for curve in curves:
            if curve.id in curve_set.curves:
                raise CatalogError(f"{path.name}: duplicate curve id {curve.id}")
        for curve in curves:
            curve_set.curves[curve.id] = curve
        curve_set.external.extend(external)


def load_curves(directory: Optional[str] = None) -> CurveSet:
    return CurveLoader(directory).load_all()
