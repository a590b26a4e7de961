from __future__ import annotations

import logging
import os
from pathlib import Path
from typing import Any, Optional

import yaml

from catalog.models import (
    Catalog,
    CatalogEntry,
    CatalogError,
    CitedFact,
    Endpoint,
    Expectation,
    IsoWitness,
    ParamSpec,
    Product,
    Variance,
)
from scalars.errors import Jorn5Error

logger = logging.getLogger(__name__)

DEFAULT_DATA_DIR = Path(__file__).resolve().parent.parent / "data"

TUPLE_FIELDS = ("power_dims", "nilpotency_type")


def data_dir(override: Optional[str] = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get("JORN5_DATA_DIR")
    return Path(env) if env else DEFAULT_DATA_DIR


def require(data: dict, fields: list[str], where: str) -> None:
    for name in fields:
        if name not in data:
            raise CatalogError(f"{where} missing required field: {name}")


def _expectation(data: dict, where: str) -> Expectation:
    require(data, ["values"], where)
    values = {
        key: tuple(value) if key in TUPLE_FIELDS else value
        for key, value in data["values"].items()
    }
    return Expectation(values=values, when=data.get("when"))


def _variance(data: dict, where: str) -> Variance:
    require(data, ["field", "printed", "computed"], f"{where}: variance")
    return Variance(
        field=str(data["field"]),
        printed=data["printed"],
        computed=data["computed"],
        note=str(data.get("note", "")),
    )


def _entry(data: dict, table: str, source: str) -> CatalogEntry:
    where = f"{source}: entry {data.get('label', '?')}"
    require(data, ["label", "products"], where)
    dim = int(data.get("dim", 5))
    products = []
    for p in data["products"] or ():
        require(p, ["i", "j", "k"], where)
        if not all(1 <= int(p[x]) <= dim for x in ("i", "j", "k")):
            raise CatalogError(f"{where}: product index outside 1..{dim}: {p}")
        products.append(Product(int(p["i"]), int(p["j"]), int(p["k"]), str(p.get("coeff", "1"))))
    params = tuple(
        ParamSpec(str(p["name"]), tuple(str(x) for x in p.get("excluded", ())))
        for p in data.get("params", ())
    )
    samples = tuple(
        {str(k): str(v) for k, v in sample.items()} for sample in data.get("samples", ())
    )
    if params and not samples:
        raise CatalogError(f"{where}: family rows need at least one sample")
    return CatalogEntry(
        label=str(data["label"]),
        dim=dim,
        table=str(data.get("table", table)),
        products=tuple(products),
        params=params,
        constraints=tuple(str(c) for c in data.get("constraints", ())),
        expected=tuple(_expectation(e, where) for e in data.get("expected", ())),
        samples=samples,
        summands=tuple(str(s) for s in data.get("summands", ())),
        family_node=data.get("family_node"),
        display=data.get("display"),
        variances=tuple(_variance(v, where) for v in data.get("variances", ())),
        source_file=source,
    )


def endpoint(data: Any) -> Endpoint:
    if isinstance(data, str):
        return Endpoint(data)
    require(data, ["label"], "endpoint")
    return Endpoint(str(data["label"]), {str(k): str(v) for k, v in (data.get("params") or {}).items()})


def free_params(data: Optional[dict]) -> dict[str, tuple[str, ...]]:
    return {str(k): tuple(str(v) for v in values) for k, values in (data or {}).items()}


def matrix(rows: list, where: str) -> tuple[tuple[str, ...], ...]:
    out = tuple(tuple(str(x) for x in row) for row in rows)
    if any(len(row) != len(out) for row in out):
        raise CatalogError(f"{where}: matrix must be square")
    return out


def _witness(data: dict, source: str) -> IsoWitness:
    where = f"{source}: witness {data.get('id', '?')}"
    require(data, ["id", "source", "target", "matrix"], where)
    return IsoWitness(
        id=str(data["id"]),
        source=endpoint(data["source"]),
        target=endpoint(data["target"]),
        matrix=matrix(data["matrix"], where),
        free_params=free_params(data.get("free_params")),
        allow_excluded=bool(data.get("allow_excluded", False)),
        note=data.get("note"),
    )


def _cited(data: dict, source: str) -> CitedFact:
    require(data, ["separates", "reason"], f"{source}: cited fact")
    first, second = data["separates"]
    return CitedFact((str(first), str(second)), str(data["reason"]))


def data_files(directory: Path) -> list[Path]:
    """YAML files plus JSON ones, which load as YAML."""
    return sorted([*directory.glob("*.yaml"), *directory.glob("*.json")])


class CatalogLoader:
    """Reads every catalog/*.yaml under the data directory into one Catalog."""

    def __init__(self, directory: Optional[str] = None):
        self.data_dir = data_dir(directory)
        self.catalog_dir = self.data_dir / "catalog"

    def load_all(self, validate: bool = True) -> Catalog:
        if not self.catalog_dir.is_dir():
            raise CatalogError(f"Catalog directory not found: {self.catalog_dir}")
        catalog = Catalog()
        for path in data_files(self.catalog_dir):
            with open(path) as f:
                try:
                    data = yaml.safe_load(f)
                except yaml.YAMLError as e:
                    raise CatalogError(f"Malformed catalog file {path.name}: {e}") from e
            load_document(catalog, data, path.name)
            logger.info("Loaded catalog file: %s", path.name)
        return finish(catalog, validate)


def load_document(catalog: Catalog, data: Optional[dict], source: str) -> Catalog:
    """Merge one parsed YAML document into catalog."""
    if data is None:
        return catalog
    if not isinstance(data, dict):
        raise CatalogError(f"{source}: top level must be a mapping")
    table = str(data.get("table", ""))
    for raw in data.get("entries") or ():
        entry = _entry(raw, table, source)
        if entry.label in catalog.entries:
            raise CatalogError(f"{source}: duplicate label {entry.label}")
        catalog.entries[entry.label] = entry
    catalog.witnesses.extend(_witness(w, source) for w in data.get("witnesses") or ())
    catalog.cited.extend(_cited(c, source) for c in data.get("cited") or ())
    return catalog


def finish(catalog: Catalog, validate: bool = True) -> Catalog:
    """Checks shared by file and text loading."""
    check_summands(catalog)
    if validate:
        catalog.validate()
    return catalog


def check_summands(catalog: Catalog) -> None:
    """Rows with declared summands must equal the direct sum of those summands."""
    from algebra.tensor import direct_sum, tensors_equal

    for entry in catalog.entries.values():
        if not entry.summands:
            continue
        try:
            parts = [catalog.instantiate(label) for label in entry.summands]
            if sum(p.dim for p in parts) != entry.dim:
                raise CatalogError(f"{entry.label}: summand dimensions do not add up to {entry.dim}")
            if not tensors_equal(direct_sum(*parts), catalog.instantiate(entry.label)):
                raise CatalogError(f"{entry.label} differs from {' + '.join(entry.summands)}")
        except CatalogError:
            raise
        except Jorn5Error as e:
            raise CatalogError(f"{entry.label}: cannot check summands: {e}") from e


def load_catalog(directory: Optional[str] = None, validate: bool = True) -> Catalog:
    return CatalogLoader(directory).load_all(validate=validate)


def load_catalog_text(text: str, source: str = "<string>", validate: bool = True) -> Catalog:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise CatalogError(f"Malformed catalog text {source}: {e}") from e
    return finish(load_document(Catalog(), data, source), validate)


def _entry_dict(entry: CatalogEntry) -> dict:
    data: dict[str, Any] = {"label": entry.label, "table": entry.table}
    if entry.display:
        data["display"] = entry.display
    if entry.dim != 5:
        data["dim"] = entry.dim
    if entry.params:
        data["params"] = [
            {"name": p.name, **({"excluded": list(p.excluded)} if p.excluded else {})}
            for p in entry.params
        ]
    if entry.constraints:
        data["constraints"] = list(entry.constraints)
    if entry.family_node:
        data["family_node"] = entry.family_node
    if entry.summands:
        data["summands"] = list(entry.summands)
    data["products"] = [
        {"i": p.i, "j": p.j, "k": p.k, "coeff": p.coeff} for p in entry.products
    ]
    if entry.samples:
        data["samples"] = [dict(s) for s in entry.samples]
    if entry.expected:
        data["expected"] = [
            {
                **({"when": e.when} if e.when else {}),
                "values": {
                    k: list(v) if isinstance(v, tuple) else v for k, v in e.values.items()
                },
            }
            for e in entry.expected
        ]
    if entry.variances:
        data["variances"] = [
            {"field": v.field, "printed": v.printed, "computed": v.computed,
             **({"note": v.note} if v.note else {})}
            for v in entry.variances
        ]
    return data


def _endpoint_dict(ep: Endpoint) -> dict:
    return {"label": ep.label, **({"params": dict(ep.params)} if ep.params else {})}


def dump_catalog(catalog: Catalog) -> str:
    """Canonical YAML for the whole catalog; load_catalog_text(dump_catalog(c)) reproduces c."""
    document: dict[str, Any] = {"entries": [_entry_dict(e) for e in catalog.entries.values()]}
    if catalog.witnesses:
        document["witnesses"] = [
            {
                "id": w.id,
                "source": _endpoint_dict(w.source),
                "target": _endpoint_dict(w.target),
                "matrix": [list(row) for row in w.matrix],
                **({"free_params": {k: list(v) for k, v in w.free_params.items()}} if w.free_params else {}),
                **({"allow_excluded": True} if w.allow_excluded else {}),
                **({"note": w.note} if w.note else {}),
            }
            for w in catalog.witnesses
        ]
    if catalog.cited:
        document["cited"] = [
            {"separates": list(c.separates), "reason": c.reason} for c in catalog.cited
        ]
    return yaml.dump(document, default_flow_style=False, sort_keys=False, allow_unicode=True)
