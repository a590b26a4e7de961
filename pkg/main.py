from __future__ import annotations

import argparse
import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Optional

import yaml

from catalog.loader import load_catalog
from catalog.models import Catalog
from catalog.profiles import ProfileCache
from deformation.loader import CurveLoader
from report.components import NodeProfiles, component_report
from report.graph import build_graph, sort_key
from report.output import ReportWriter, emit_dot, emit_json
from report.runner import STAGES, Workbench
from scalars.errors import InputError, Jorn5Error, VerificationError
from scalars.parser import parse_constant

LOG_DIR = Path(os.environ.get("JORN5_HOME", str(Path.home() / ".jorn5"))).expanduser()
LOG_DIR.mkdir(parents=True, exist_ok=True)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

# stdout carries DOT/JSON output, so log lines go to stderr
logging.basicConfig(
    level=logging.INFO,
    format=LOG_FORMAT,
    handlers=[
        logging.StreamHandler(sys.stderr),
        logging.handlers.RotatingFileHandler(
            LOG_DIR / "jorn5.log",
            maxBytes=5_000_000,
            backupCount=3,
        ),
    ],
)
logger = logging.getLogger(__name__)

REPO_ROOT = Path(__file__).resolve().parent

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


def load_config(path: Optional[str] = None) -> dict:
    config_path = Path(path) if path else REPO_ROOT / "config.yaml"
    if not config_path.exists():
        logger.error("config.yaml not found at %s", config_path)
        sys.exit(EXIT_INPUT)
    with open(config_path) as f:
        return yaml.safe_load(f) or {}


def add_log_dir(log_dir: Optional[str]) -> None:
    """Extra log file under the configured log_dir, next to the one under JORN5_HOME."""
    if not log_dir:
        return
    path = Path(log_dir).expanduser()
    if path.resolve() == LOG_DIR.resolve():
        return
    path.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(path / "jorn5.log", maxBytes=5_000_000, backupCount=3)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.getLogger().addHandler(handler)


def resolve_data_dir(config: dict, override: Optional[str] = None) -> Optional[str]:
    if override:
        return override
    if os.environ.get("JORN5_DATA_DIR"):
        return os.environ["JORN5_DATA_DIR"]
    configured = config.get("data_dir")
    if not configured:
        return None
    path = Path(configured).expanduser()
    return str(path if path.is_absolute() else REPO_ROOT / path)


def parse_samples(values: list[str]) -> dict[str, list[dict[str, str]]]:
    """LABEL=name:v,name:v;name:v,... into {label: [sample, ...]}."""
    overrides: dict[str, list[dict[str, str]]] = {}
    for value in values or ():
        label, sep, rest = value.partition("=")
        if not sep or not label.strip():
            raise InputError(f"Bad --samples value {value!r}: expected LABEL=name:v,...;...")
        samples = []
        for chunk in rest.split(";"):
            if not chunk.strip():
                continue
            sample = {}
            for pair in chunk.split(","):
                name, sep, v = pair.partition(":")
                if not sep:
                    raise InputError(f"Bad sample {chunk!r} in --samples: expected name:value")
                sample[name.strip()] = v.strip()
            samples.append(sample)
        overrides[label.strip()] = samples
    return overrides


def parse_params(values: list[str]) -> dict[str, str]:
    params = {}
    for value in values or ():
        name, sep, v = value.partition("=")
        if not sep:
            raise InputError(f"Bad --param {value!r}: expected name=value")
        parse_constant(v.strip())
        params[name.strip()] = v.strip()
    return params


def open_catalog(config: dict, args: argparse.Namespace) -> Catalog:
    catalog = load_catalog(resolve_data_dir(config, args.data_dir))
    overrides = {**(config.get("samples") or {}), **parse_samples(args.samples)}
    if overrides:
        catalog.with_samples(overrides)
    return catalog


def emit(args: argparse.Namespace, config: dict, name: str, content: str) -> None:
    if getattr(args, "output", None):
        path = Path(args.output).expanduser()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
        logger.info("Saved report to %s", path)
    elif getattr(args, "save", False):
        ReportWriter(config.get("output_dir")).write(name, content)
    else:
        sys.stdout.write(content)


def cmd_catalog(args: argparse.Namespace, config: dict) -> int:
    catalog = open_catalog(config, args)
    if args.action == "list":
        for entry in catalog.entries.values():
            if args.table and entry.table != args.table:
                continue
            params = ", ".join(entry.param_names)
            suffix = f" [{params}]" if params else ""
            print(f"{entry.label}\ttable {entry.table}\tdim {entry.dim}{suffix}")
        return EXIT_OK
    if not args.label:
        raise InputError("catalog show needs a label")
    entry = catalog.get(args.label)
    print(f"{entry.label} (table {entry.table}, dim {entry.dim})")
    if entry.display:
        print(f"  printed as {entry.display}")
    for p in entry.products:
        print(f"  n{p.i}n{p.j} = {'' if p.coeff == '1' else p.coeff + '*'}n{p.k}")
    for spec in entry.params:
        excluded = f" excluding {', '.join(spec.excluded)}" if spec.excluded else ""
        print(f"  parameter {spec.name}{excluded}")
    for constraint in entry.constraints:
        print(f"  constraint {constraint}")
    if entry.summands:
        print(f"  = {' + '.join(entry.summands)}")
    if entry.family_node:
        print(f"  family node {entry.family_node}")
    return EXIT_OK


def cmd_invariants(args: argparse.Namespace, config: dict) -> int:
    catalog = open_catalog(config, args)
    algebra = catalog.make_id(args.label, parse_params(args.param))
    profile = ProfileCache(catalog).get(algebra, with_cohomology=not args.no_cohomology)
    data = {"algebra": algebra.key, **profile.to_dict()}
    expected = catalog.expected_invariants(algebra)
    if expected:
        data["expected"] = {k: list(v) if isinstance(v, tuple) else v for k, v in expected.items()}
    variances = catalog.get(algebra.label).variances
    if variances:
        data["variances"] = [{"field": v.field, "printed": v.printed, "computed": v.computed} for v in variances]
    emit(args, config, f"invariants-{algebra.key}.json", emit_json(data))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: dict) -> int:
    catalog = open_catalog(config, args)
    curves = CurveLoader(resolve_data_dir(config, args.data_dir)).load_all()
    stages = None if args.stage == "all" else [args.stage]
    report = Workbench(catalog, curves, config).run(stages)
    logger.info("Verification summary:\n%s", report.summary())
    if args.output or args.save:
        emit(args, config, f"verify-{args.stage}.json", emit_json(report))
    else:
        print(report.summary())
    return report.exit_code


def cmd_report(args: argparse.Namespace, config: dict) -> int:
    catalog = open_catalog(config, args)
    curves = CurveLoader(resolve_data_dir(config, args.data_dir)).load_all()
    graph = build_graph(catalog, curves)
    if args.kind == "graph":
        if args.format == "dot":
            emit(args, config, "dominance.dot", emit_dot(graph, include_scaling=not args.no_scaling))
        else:
            emit(args, config, "dominance.json", emit_json(graph))
        return EXIT_OK
    report = component_report(graph, NodeProfiles(graph, catalog))
    emit(args, config, "components.json", emit_json(report))
    logger.info("%s", report.summary())
    expected = config.get("expected_components")
    if expected and sorted(report.roots, key=sort_key) != sorted(expected, key=sort_key):
        logger.warning("Roots %s differ from expected %s", report.roots, expected)
        return EXIT_MISMATCH
    return EXIT_OK if report.confirmed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to config.yaml")
    common.add_argument("--data-dir", help="directory holding catalog/ and curves/")
    common.add_argument("--samples", action="append", default=[],
                        help="LABEL=name:v,name:v;name:v,... overrides family samples")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", help="write to this file instead of stdout")
    out.add_argument("--save", action="store_true", help="write under output_dir from the config")

    parser = argparse.ArgumentParser(prog="jorn5", description="Nilpotent Jordan algebra workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list or show catalog rows")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("label", nargs="?")
    p.add_argument("--table", help="only rows from this table")
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("invariants", parents=[common, out], help="invariant profile of one algebra")
    p.add_argument("label")
    p.add_argument("--param", action="append", default=[], help="name=value")
    p.add_argument("--no-cohomology", action="store_true", help="skip H2")
    p.set_defaults(handler=cmd_invariants)

    p = sub.add_parser("verify", parents=[common, out], help="run verification stages")
    p.add_argument("stage", choices=(*STAGES, "all"))
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("report", parents=[common, out], help="dominance graph and components")
    p.add_argument("kind", choices=("graph", "components"))
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--no-scaling", action="store_true", help="omit the edges to the zero algebra")
    p.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config)
    add_log_dir(config.get("log_dir"))
    try:
        return args.handler(args, config)
    except InputError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except VerificationError as e:
        logger.error("Verification failed: %s", e)
        return EXIT_MISMATCH
    except Jorn5Error as e:
        logger.error("%s", e, exc_info=True)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
