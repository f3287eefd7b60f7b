"""Command-line front end: enumerate vocabularies, score mappings, run
the optimizers, and emit the shipped demo files.

Commands read a JSON run config (``--config``) naming the catalog, the
vocabulary spec, optional weights and familiarity files, the active
criteria, and solver settings.  Catalog and spec entries accept
``builtin:<name>`` in place of a path.  Output is a plain table or, with
``--format structured``, the same JSON family as the inputs.
"""

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import fixtures as _fixtures
from ._jsonio import dumps, read_json
from .catalog import ACTIVITIES, TaskCatalog, builtin_catalog, load_catalog
from .criteria import (
    CriterionContext,
    QualityReport,
    WeightVector,
    default_criteria,
    load_familiarity,
    load_weights,
    overall_quality,
)
from .errors import GestmapError, ParseError
from .optimize import (
    SolverConfig,
    load_mapping,
    solve,
    verify_mapping,
)
from .vocabulary import MODALITIES, Vocabulary, builtin_document, load_spec

_BUILTIN_PREFIX = "builtin:"


@dataclass(frozen=True)
class RunConfig:
    """Fully loaded inputs for the score and optimize commands."""

    catalog: TaskCatalog
    vocabulary: Vocabulary
    weights: WeightVector
    familiarity: dict
    active: tuple
    solver: SolverConfig
    format: str


def _load_catalog_ref(ref: str, base: Path) -> TaskCatalog:
    if ref.startswith(_BUILTIN_PREFIX):
        name = ref[len(_BUILTIN_PREFIX):]
        if name not in ACTIVITIES:
            raise ParseError(
                f"unknown builtin catalog '{name}'", locus="config.catalog"
            )
        return builtin_catalog(name)
    return load_catalog(base / ref)


def _load_spec_ref(ref: str, base: Path) -> Vocabulary:
    if ref.startswith(_BUILTIN_PREFIX):
        name = ref[len(_BUILTIN_PREFIX):]
        if name not in MODALITIES:
            raise ParseError(f"unknown builtin spec '{name}'", locus="config.spec")
        return builtin_document(name).enumerate()
    return load_spec(base / ref).enumerate()


def _resolve_criteria(names) -> tuple:
    by_label = {c.label: c for c in default_criteria()}
    if names is None:
        return tuple(by_label.values())
    chosen = []
    for name in names:
        if name not in by_label:
            raise ParseError(f"unknown criterion '{name}'", locus="config.criteria")
        chosen.append(by_label[name])
    if not chosen:
        raise ParseError("at least one criterion must be active", locus="config.criteria")
    return tuple(chosen)


def load_run_config(path) -> RunConfig:
    """Read and resolve a run config file; paths are relative to it."""
    path = Path(path)
    data = read_json(path)
    if not isinstance(data, dict):
        raise ParseError("config must be an object", locus="config")
    base = path.parent
    known = {
        "catalog", "spec", "weights", "familiarity",
        "activity", "criteria", "solver", "format",
    }
    for key in data:
        if key not in known:
            raise ParseError(f"unknown field '{key}'", locus="config")
    if "catalog" not in data or not isinstance(data["catalog"], str):
        raise ParseError("field 'catalog' must be a string", locus="config")
    if "spec" not in data or not isinstance(data["spec"], str):
        raise ParseError("field 'spec' must be a string", locus="config")
    catalog = _load_catalog_ref(data["catalog"], base)
    activity = data.get("activity")
    if activity is not None:
        if activity not in ("exploration", "editing"):
            raise ParseError(
                "field 'activity' must be exploration, editing, or null",
                locus="config",
            )
        catalog = TaskCatalog(tuple(t for t in catalog if t.activity == activity))
    vocabulary = _load_spec_ref(data["spec"], base)
    names = data.get("criteria")
    if names is not None and not isinstance(names, list):
        raise ParseError("field 'criteria' must be a list", locus="config")
    active = _resolve_criteria(names)
    if data.get("weights") is not None:
        pool = load_weights(base / data["weights"]).weights
        missing = [c.label for c in active if c.label not in pool]
        if missing:
            raise ParseError(
                f"no weight for active criterion '{missing[0]}'",
                locus="config.weights",
            )
        weights = WeightVector({c.label: pool[c.label] for c in active})
    else:
        weights = WeightVector.uniform(active)
    familiarity = {}
    if data.get("familiarity") is not None:
        familiarity = load_familiarity(base / data["familiarity"])
    solver = SolverConfig()
    if data.get("solver") is not None:
        if not isinstance(data["solver"], dict):
            raise ParseError("field 'solver' must be an object", locus="config")
        solver = SolverConfig.from_dict(data["solver"], locus="config.solver")
    fmt = data.get("format", "table")
    if fmt not in ("table", "structured"):
        raise ParseError("field 'format' must be table or structured", locus="config")
    return RunConfig(
        catalog=catalog,
        vocabulary=vocabulary,
        weights=weights,
        familiarity=familiarity,
        active=active,
        solver=solver,
        format=fmt,
    )


def _report_lines(report: QualityReport) -> list:
    weights = dict(report.weights)
    lines = ["criterion         weight       q"]
    for name, value in report.scores:
        lines.append(f"{name:<17s} {weights[name]:.9f}  {value:.9f}")
    lines.append(f"overall quality   {report.aggregate:.9f}")
    return lines


def _mapping_rows(mapping, vocab: Vocabulary) -> list:
    fingerprints = vocab.fingerprints()
    return [
        {"task": ref, "gesture_fingerprint": fingerprints[index]}
        for ref, index in mapping.items()
    ]


def _print_structured(payload) -> None:
    sys.stdout.write(dumps(payload))


def cmd_enumerate(args) -> int:
    if args.builtin is not None:
        vocabulary = builtin_document(args.builtin).enumerate()
    elif args.config is not None:
        vocabulary = load_run_config(args.config).vocabulary
    else:
        print("error: enumerate needs --config or --builtin", file=sys.stderr)
        return 1
    fmt = args.format or "table"
    if fmt == "structured":
        payload = {"gestures": len(vocabulary)}
        if not args.count_only:
            payload["fingerprints"] = list(vocabulary.fingerprints())
        _print_structured(payload)
        return 0
    print(f"gestures: {len(vocabulary)}")
    if not args.count_only:
        for fingerprint in vocabulary.fingerprints():
            print(fingerprint)
    return 0


def cmd_score(args) -> int:
    config = _apply_overrides(load_run_config(args.config), args)
    mapping = load_mapping(args.mapping, config.vocabulary)
    violations = verify_mapping(mapping, config.catalog, config.vocabulary)
    if violations:
        for violation in violations:
            print(f"violation: {violation.kind}: {violation.detail}", file=sys.stderr)
        return 1
    ctx = CriterionContext(config.catalog, config.vocabulary, config.familiarity)
    report = overall_quality(mapping, config.weights, ctx, config.active)
    if config.format == "structured":
        _print_structured(
            {
                "mapping": _mapping_rows(mapping, config.vocabulary),
                "report": report.to_dict(),
            }
        )
        return 0
    for line in _report_lines(report):
        print(line)
    return 0


def cmd_optimize(args) -> int:
    config = _apply_overrides(load_run_config(args.config), args)
    ctx = CriterionContext(config.catalog, config.vocabulary, config.familiarity)
    result = solve(
        config.catalog,
        config.vocabulary,
        config.weights,
        ctx,
        config.active,
        config.solver,
    )
    if config.format == "structured":
        _print_structured(
            {
                "algorithm": config.solver.algorithm,
                "iterations_used": result.iterations_used,
                "mapping": _mapping_rows(result.mapping, config.vocabulary),
                "optimality": result.optimality,
                "report": result.report.to_dict(),
            }
        )
        return 0
    fingerprints = config.vocabulary.fingerprints()
    width = max((len(ref) for ref, _ in result.mapping.items()), default=4)
    print(f"algorithm: {config.solver.algorithm}")
    print(f"optimality: {result.optimality}")
    print(f"iterations: {result.iterations_used}")
    for ref, index in result.mapping.items():
        print(f"{ref:<{width}s}  {fingerprints[index]}")
    for line in _report_lines(result.report):
        print(line)
    return 0


def cmd_fixtures(args) -> int:
    paths = _fixtures.write_fixture_files(args.directory)
    for path in paths:
        print(f"wrote {path}")
    return 0


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    if getattr(args, "format", None):
        config = replace(config, format=args.format)
    if getattr(args, "seed", None) is not None:
        config = replace(config, solver=replace(config.solver, seed=args.seed))
    return config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gestmap",
        description="Task catalogs, gesture vocabularies, and mapping quality",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list a vocabulary's gestures")
    p_enum.add_argument("--config", help="run config file")
    p_enum.add_argument(
        "--builtin", choices=MODALITIES, help="use a builtin spec instead"
    )
    p_enum.add_argument("--count-only", action="store_true", help="print the count only")
    p_enum.add_argument("--format", choices=("table", "structured"))
    p_enum.set_defaults(func=cmd_enumerate)

    p_score = sub.add_parser("score", help="score a mapping file")
    p_score.add_argument("--config", required=True, help="run config file")
    p_score.add_argument("--mapping", required=True, help="mapping file to score")
    p_score.add_argument("--format", choices=("table", "structured"))
    p_score.add_argument("--seed", type=int)
    p_score.set_defaults(func=cmd_score)

    p_opt = sub.add_parser("optimize", help="search for a high-quality mapping")
    p_opt.add_argument("--config", required=True, help="run config file")
    p_opt.add_argument("--format", choices=("table", "structured"))
    p_opt.add_argument("--seed", type=int, help="override the solver seed")
    p_opt.set_defaults(func=cmd_optimize)

    p_fix = sub.add_parser("fixtures", help="write the demo files to a directory")
    p_fix.add_argument("directory", help="target directory")
    p_fix.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GestmapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
