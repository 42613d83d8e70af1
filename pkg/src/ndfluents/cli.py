"""Command-line surface for the contextualization pipeline.

Subcommands: ``gen-ontology``, ``ingest-csv``, ``contextualize``,
``decontextualize``, ``validate``, ``reason``, ``query``, ``stats``.
Data goes to standard output or ``--out``; logs go to standard error.
Exit status is 0 on success, 1 when ``validate`` finds violations, and 2
on usage, configuration, or input-format errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .config import Config, ConfigError, default_config, load_config
from .contextualize import (
    AnnotatedStatement,
    PatternError,
    contextualize,
    decontextualize,
    size_report,
)
from .formats import (
    FormatError,
    read_annotated_nquads,
    read_statements_csv,
    write_annotated_nquads,
    write_statements_csv,
)
from .ingest import IngestError, ingest_csv
from .parser import NQUADS, NTRIPLES, TURTLE, ParseError, normalize_format, parse
from .query import QueryError, match, parse_pattern
from .reasoner import saturate, validate
from .serializer import canonicalize, serialize
from .terms import Graph, Iri
from .vocabulary import axioms_from_graph, axioms_to_graph

log = logging.getLogger("ndfluents")

_EXTENSION_FORMATS = {
    ".nt": NTRIPLES,
    ".ntriples": NTRIPLES,
    ".nq": NQUADS,
    ".nquads": NQUADS,
    ".ttl": TURTLE,
    ".turtle": TURTLE,
}

STATEMENTS_CSV = "csv"
STATEMENTS_NQUADS = "nquads"


class _UsageError(ValueError):
    """An error the user can fix: bad flags, files, or formats."""


def _guess_format(path: str, override: str | None, default: str = TURTLE) -> str:
    if override:
        return normalize_format(override)
    return _EXTENSION_FORMATS.get(Path(path).suffix.lower(), default)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise _UsageError(f"cannot read {path}: {error.strerror or error}") from None


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as error:
        raise _UsageError(f"cannot write {out}: {error.strerror or error}") from None


def _read_graph(path: str, fmt: str | None) -> Graph:
    text = _read_text(path)
    resolved = _guess_format(path, fmt)
    data = parse(text, resolved)
    if isinstance(data, Graph):
        return data
    merged = Graph()
    for graph in data:
        merged = merged.union(graph)
    return Graph(merged)


def _write_graph(graph: Graph, out: str | None, fmt: str | None, config: Config) -> None:
    resolved = _guess_format(out or "", fmt, default=TURTLE)
    graph = canonicalize(graph)
    _write_text(serialize(graph, resolved, prefixes=config.prefixes()), out)


def _load_config_arg(path: str | None) -> Config:
    if path is None:
        return default_config()
    return load_config(_read_text(path))


def _read_statements(args: argparse.Namespace, config: Config) -> list[AnnotatedStatement]:
    fmt = args.format
    if fmt == STATEMENTS_NQUADS:
        if not args.sidecar:
            raise _UsageError("--format nquads needs --sidecar FILE")
        return read_annotated_nquads(
            _read_text(args.statements),
            _read_text(args.sidecar),
            config.registry,
            sidecar_format=args.sidecar_format,
        )
    return read_statements_csv(_read_text(args.statements))


def _write_statements(
    statements: list[AnnotatedStatement], args: argparse.Namespace
) -> None:
    if args.format == STATEMENTS_NQUADS:
        if not args.sidecar:
            raise _UsageError("--format nquads needs --sidecar FILE to write to")
        nquads, sidecar = write_annotated_nquads(statements)
        _write_text(nquads, args.out)
        _write_text(sidecar, args.sidecar)
        return
    _write_text(write_statements_csv(statements), args.out)


def _config_tbox(config: Config, tbox_paths: Sequence[str] | None):
    axioms = config.axioms()
    for path in tbox_paths or ():
        axioms += axioms_from_graph(_read_graph(path, None))
    return axioms


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen_ontology(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    if args.split:
        directory = Path(args.split)
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as error:
            raise _UsageError(f"cannot create {args.split}: {error.strerror or error}") from None
        extension = ".nt" if args.format and normalize_format(args.format) == NTRIPLES else ".ttl"
        for name, axioms in config.modules():
            path = directory / f"{name}{extension}"
            _write_graph(axioms_to_graph(axioms), str(path), args.format, config)
            log.info("wrote %s (%d axioms)", path, len(axioms))
        return 0
    axioms = config.axioms()
    log.info("generated %d axioms", len(axioms))
    _write_graph(axioms_to_graph(axioms), args.out, args.format, config)
    return 0


def _cmd_ingest_csv(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    statements, _, descriptions = ingest_csv(_read_text(args.csv))
    log.info(
        "ingested %d statements, %d description triples", len(statements), len(descriptions)
    )
    _write_statements(statements, args)
    if args.descriptions:
        _write_graph(descriptions, args.descriptions, None, config)
    return 0


def _cmd_contextualize(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    statements = _read_statements(args, config)
    graph = contextualize(
        statements,
        config.registry,
        config.model,
        config.policy,
        config.vocab,
        predicate_mode=config.predicate_mode,
    )
    for path in args.merge or ():
        graph = graph.union(_read_graph(path, None))
    log.info(
        "contextualized %d statements into %d triples (%s)",
        len(statements),
        len(graph),
        config.model.kind,
    )
    _write_graph(graph, args.out, args.out_format, config)
    return 0


def _cmd_decontextualize(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    graph = _read_graph(args.graph, args.in_format)
    selection = {Iri(value) for value in args.context or ()} or None
    statements = decontextualize(graph, config.registry, selection, config.vocab)
    log.info("recovered %d statements", len(statements))
    _write_statements(statements, args)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    graph = _read_graph(args.graph, args.in_format)
    axioms = _config_tbox(config, args.tbox)
    same_extent = config.same_extent_check and not args.no_same_extent
    violations = validate(
        graph, axioms, config.registry, config.vocab, same_extent=same_extent
    )
    for violation in violations:
        sys.stdout.write(violation.render() + "\n")
    if args.report:
        report = [
            {
                "kind": violation.kind,
                "subjects": [subject.n3() for subject in violation.subjects],
                "detail": violation.detail,
                "triples": [triple.n3() for triple in violation.triples],
            }
            for violation in violations
        ]
        _write_text(json.dumps(report, indent=2) + "\n", args.report)
    log.info("%d violations", len(violations))
    return 1 if violations else 0


def _cmd_reason(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    graph = _read_graph(args.graph, args.in_format)
    axioms = _config_tbox(config, args.tbox)
    result = saturate(graph, axioms, config.vocab)
    for violation in result.violations:
        log.warning("%s", violation.render())
    log.info("derived %d new triples", len(result.derived))
    output = Graph(result.derived) if args.derived_only else result.all
    _write_graph(output, args.out, args.out_format, config)
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    graph = _read_graph(args.graph, args.in_format)
    pattern = parse_pattern(_read_text(args.pattern))
    table = match(graph, pattern, config.registry, config.vocab)
    log.info("%d rows", len(table.rows))
    _write_text(table.to_csv(), args.out)
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    config = _load_config_arg(args.config)
    statements = _read_statements(args, config)
    lines = ["representation,model,triples"]
    for row in size_report(statements, config.registry, config.policy, config.vocab):
        lines.append(f"{row.representation},{row.model},{row.triples}")
    _write_text("\n".join(lines) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", metavar="FILE", help="run configuration (INI)")


def _add_statement_io(parser: argparse.ArgumentParser, reading: bool) -> None:
    parser.add_argument(
        "--format",
        choices=(STATEMENTS_CSV, STATEMENTS_NQUADS),
        default=STATEMENTS_CSV,
        help="annotated-statement format (default csv)",
    )
    parser.add_argument(
        "--sidecar",
        metavar="FILE",
        help="bundle sidecar for --format nquads",
    )
    if reading:
        parser.add_argument(
            "--sidecar-format",
            choices=("csv", "turtle"),
            default="csv",
            help="sidecar format when reading nquads (default csv)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndfluents",
        description="Rewrite annotated RDF statements as contextual parts and back.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log progress to stderr (-vv for debug)",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = commands.add_parser(
        "gen-ontology", help="emit the TBox modules the configuration calls for"
    )
    _add_config(p)
    p.add_argument("-o", "--out", metavar="FILE", help="output file (default stdout)")
    p.add_argument("--format", metavar="FMT", help="turtle (default) or ntriples")
    p.add_argument("--split", metavar="DIR", help="write one file per module instead")
    p.set_defaults(func=_cmd_gen_ontology)

    p = commands.add_parser(
        "ingest-csv", help="population-estimate CSV to annotated statements"
    )
    _add_config(p)
    p.add_argument("csv", help="estimates CSV (source,year,population_low,population_high)")
    p.add_argument("-o", "--out", metavar="FILE", help="statements output (default stdout)")
    _add_statement_io(p, reading=False)
    p.add_argument(
        "--descriptions",
        metavar="FILE",
        help="also write the context-description graph (merge it back in with "
        "`contextualize --merge`)",
    )
    p.set_defaults(func=_cmd_ingest_csv)

    p = commands.add_parser(
        "contextualize", help="annotated statements to a contextual-parts graph"
    )
    _add_config(p)
    p.add_argument("statements", help="annotated statements file")
    _add_statement_io(p, reading=True)
    p.add_argument(
        "--merge",
        action="append",
        metavar="FILE",
        help="graph to union into the output (repeatable)",
    )
    p.add_argument("-o", "--out", metavar="FILE", help="graph output (default stdout)")
    p.add_argument("--out-format", metavar="FMT", help="turtle (default) or ntriples")
    p.set_defaults(func=_cmd_contextualize)

    p = commands.add_parser(
        "decontextualize", help="contextual-parts graph back to annotated statements"
    )
    _add_config(p)
    p.add_argument("graph", help="graph file (turtle/ntriples/nquads)")
    p.add_argument("--in-format", metavar="FMT", help="override input format")
    p.add_argument(
        "--context",
        action="append",
        metavar="IRI",
        help="keep only statements in this context (repeatable)",
    )
    p.add_argument("-o", "--out", metavar="FILE", help="statements output (default stdout)")
    _add_statement_io(p, reading=False)
    p.set_defaults(func=_cmd_decontextualize)

    p = commands.add_parser(
        "validate", help="check the contextual-part pattern (exit 1 on violations)"
    )
    _add_config(p)
    p.add_argument("graph", help="graph file")
    p.add_argument("--in-format", metavar="FMT", help="override input format")
    p.add_argument(
        "--tbox",
        action="append",
        metavar="FILE",
        help="extra axiom graph to validate against (repeatable)",
    )
    p.add_argument(
        "--no-same-extent",
        action="store_true",
        help="skip the shared-extent agreement check",
    )
    p.add_argument(
        "--report",
        metavar="FILE",
        help="also write the violations as a JSON report",
    )
    p.set_defaults(func=_cmd_validate)

    p = commands.add_parser("reason", help="saturate a graph under the configured TBox")
    _add_config(p)
    p.add_argument("graph", help="graph file")
    p.add_argument("--in-format", metavar="FMT", help="override input format")
    p.add_argument("--tbox", action="append", metavar="FILE", help="extra axiom graph (repeatable)")
    p.add_argument(
        "--derived-only",
        action="store_true",
        help="write only the newly derived triples",
    )
    p.add_argument("-o", "--out", metavar="FILE", help="graph output (default stdout)")
    p.add_argument("--out-format", metavar="FMT", help="turtle (default) or ntriples")
    p.set_defaults(func=_cmd_reason)

    p = commands.add_parser("query", help="run a pattern file and emit CSV")
    _add_config(p)
    p.add_argument("graph", help="graph file")
    p.add_argument("--pattern", required=True, metavar="FILE", help="pattern file")
    p.add_argument("--in-format", metavar="FMT", help="override input format")
    p.add_argument("-o", "--out", metavar="FILE", help="CSV output (default stdout)")
    p.set_defaults(func=_cmd_query)

    p = commands.add_parser(
        "stats", help="triple counts per representation for a statement set"
    )
    _add_config(p)
    p.add_argument("statements", help="annotated statements file")
    _add_statement_io(p, reading=True)
    p.add_argument("-o", "--out", metavar="FILE", help="CSV output (default stdout)")
    p.set_defaults(func=_cmd_stats)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=(
            logging.WARNING
            if args.verbose == 0
            else logging.INFO if args.verbose == 1 else logging.DEBUG
        ),
        format="%(levelname)s %(message)s",
    )
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (
        _UsageError,
        ConfigError,
        FormatError,
        IngestError,
        ParseError,
        PatternError,
        QueryError,
        KeyError,
        ValueError,
    ) as error:
        if isinstance(error, KeyError) and error.args:
            message = str(error.args[0])
        else:
            message = str(error)
        if isinstance(error, ParseError):
            message = f"{getattr(args, 'graph', getattr(args, 'statements', 'input'))}: {message}"
        sys.stderr.write(f"error: {message}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
