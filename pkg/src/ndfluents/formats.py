"""File formats for annotated statements.

Two interchange formats:

- statements CSV: `subject,predicate,object,objectType,dim1,ctx1,...` with a
  variable number of trailing (dimension, context) pairs. objectType is
  `iri`, `literal` (plain string), `literal:<datatype IRI>`, or
  `literal@<language tag>`.
- annotated N-Quads: the graph label names a context bundle; a sidecar maps
  each bundle to its (dimension, context) pairs, either as CSV
  (`bundle,dimension,context`) or as Turtle using the dimensions' extent
  properties.

Context descriptions are not carried by either format.
"""

from __future__ import annotations

import csv
import io

from .contextualize import AnnotatedStatement, ContextAssignment, _digest
from .parser import parse_nquads, parse_turtle
from .serializer import serialize_nquads
from .terms import Graph, Iri, Literal, Term, Triple
from .vocabulary import DimensionRegistry

DEFAULT_BUNDLE_BASE = "http://purl.org/NET/ndfluents/bundle#"

CSV_HEADER = ["subject", "predicate", "object", "objectType"]


class FormatError(ValueError):
    """Malformed statements file; message carries the offending row."""


def _parse_object(lexical: str, object_type: str, row: int) -> Term:
    if object_type == "iri":
        try:
            return Iri(lexical)
        except ValueError as exc:
            raise FormatError(f"row {row}: {exc}")
    if object_type == "literal":
        return Literal(lexical)
    if object_type.startswith("literal:"):
        try:
            return Literal(lexical, datatype=Iri(object_type[len("literal:"):]))
        except ValueError as exc:
            raise FormatError(f"row {row}: {exc}")
    if object_type.startswith("literal@"):
        try:
            return Literal(lexical, language=object_type[len("literal@"):])
        except ValueError as exc:
            raise FormatError(f"row {row}: {exc}")
    raise FormatError(f"row {row}: unknown objectType {object_type!r}")


def _format_object(term: Term, row_hint: str) -> tuple[str, str]:
    if isinstance(term, Iri):
        return term.value, "iri"
    if isinstance(term, Literal):
        if term.language is not None:
            return term.lexical, f"literal@{term.language}"
        from .terms import XSD_STRING

        if term.datatype == XSD_STRING:
            return term.lexical, "literal"
        return term.lexical, f"literal:{term.datatype.value}"
    raise FormatError(f"{row_hint}: blank nodes cannot be written to statements CSV")


def read_statements_csv(text: str) -> list[AnnotatedStatement]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise FormatError("empty statements CSV")
    header = [cell.strip() for cell in rows[0][:4]]
    if header != CSV_HEADER:
        raise FormatError(f"bad header: expected {','.join(CSV_HEADER)},dim1,ctx1,...")
    statements = []
    for idx, row in enumerate(rows[1:], start=2):
        if len(row) < 6:
            raise FormatError(f"row {idx}: expected at least one (dimension, context) pair")
        subject_val, predicate_val, object_val, object_type = (cell.strip() for cell in row[:4])
        rest = [cell.strip() for cell in row[4:]]
        if len(rest) % 2 != 0:
            raise FormatError(f"row {idx}: dangling dimension without a context IRI")
        try:
            subject = Iri(subject_val)
            predicate = Iri(predicate_val)
        except ValueError as exc:
            raise FormatError(f"row {idx}: {exc}")
        obj = _parse_object(object_val, object_type, idx)
        assignments = []
        for dim, ctx in zip(rest[::2], rest[1::2]):
            if not dim and not ctx:
                continue  # padded short row from spreadsheet tools
            try:
                assignments.append(ContextAssignment(dim, Iri(ctx)))
            except ValueError as exc:
                raise FormatError(f"row {idx}: {exc}")
        try:
            statements.append(
                AnnotatedStatement(Triple(subject, predicate, obj), frozenset(assignments))
            )
        except ValueError as exc:
            raise FormatError(f"row {idx}: {exc}")
    return statements


def write_statements_csv(statements: list[AnnotatedStatement]) -> str:
    width = max((len(s.contexts) for s in statements), default=1)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = list(CSV_HEADER)
    for i in range(1, width + 1):
        header += [f"dim{i}", f"ctx{i}"]
    writer.writerow(header)
    for idx, statement in enumerate(
        sorted(statements, key=lambda s: (s.base.sort_key(), s.assignment_pairs())), start=2
    ):
        obj_val, obj_type = _format_object(statement.base.object, f"row {idx}")
        row = [statement.base.subject.value, statement.base.predicate.value, obj_val, obj_type]
        for dim, ctx in statement.assignment_pairs():
            row += [dim, ctx.value]
        row += [""] * (2 * width - (len(row) - 4))
        writer.writerow(row)
    return out.getvalue()


# --- annotated N-Quads with bundle sidecar -----------------------------------


def _bundle_iri(pairs: tuple[tuple[str, Iri], ...], base: str = DEFAULT_BUNDLE_BASE) -> Iri:
    return Iri(base + _digest(*(f"{dim}={ctx.value}" for dim, ctx in sorted(pairs))))


def read_bundle_sidecar_csv(text: str) -> dict[Iri, list[tuple[str, Iri]]]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows or [c.strip() for c in rows[0]] != ["bundle", "dimension", "context"]:
        raise FormatError("bundle sidecar CSV needs header bundle,dimension,context")
    bundles: dict[Iri, list[tuple[str, Iri]]] = {}
    for idx, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise FormatError(f"sidecar row {idx}: expected 3 columns")
        try:
            bundle, dim, ctx = Iri(row[0].strip()), row[1].strip(), Iri(row[2].strip())
        except ValueError as exc:
            raise FormatError(f"sidecar row {idx}: {exc}")
        bundles.setdefault(bundle, []).append((dim, ctx))
    return bundles


def read_bundle_sidecar_turtle(
    text: str, registry: DimensionRegistry
) -> dict[Iri, list[tuple[str, Iri]]]:
    """Turtle sidecar: one `<bundle> <extent property> <context>` triple per
    pair, using the registered dimensions' extent properties."""
    graph = parse_turtle(text)
    by_extent = {dim.extent: dim.name for dim in registry}
    bundles: dict[Iri, list[tuple[str, Iri]]] = {}
    for triple in graph.sorted_triples():
        name = by_extent.get(triple.predicate)
        if name is None:
            continue
        if not isinstance(triple.subject, Iri) or not isinstance(triple.object, Iri):
            raise FormatError(f"sidecar triple must link IRIs: {triple.n3()}")
        bundles.setdefault(triple.subject, []).append((name, triple.object))
    if not bundles:
        raise FormatError("turtle sidecar declares no bundles via registered extent properties")
    return bundles


def read_annotated_nquads(
    nquads_text: str,
    sidecar_text: str,
    registry: DimensionRegistry,
    sidecar_format: str = "csv",
) -> list[AnnotatedStatement]:
    if sidecar_format == "csv":
        bundles = read_bundle_sidecar_csv(sidecar_text)
    elif sidecar_format in ("turtle", "ttl"):
        bundles = read_bundle_sidecar_turtle(sidecar_text, registry)
    else:
        raise FormatError(f"unknown sidecar format: {sidecar_format!r}")
    statements = []
    for graph in parse_nquads(nquads_text):
        if graph.name is None:
            raise FormatError(
                "triples outside a named bundle carry no context; "
                "every statement needs a graph label"
            )
        pairs = bundles.get(graph.name)
        if pairs is None:
            raise FormatError(f"bundle {graph.name.n3()} is not described by the sidecar")
        assignments = frozenset(ContextAssignment(dim, ctx) for dim, ctx in pairs)
        for triple in graph.sorted_triples():
            statements.append(AnnotatedStatement(triple, assignments))
    return statements


def write_annotated_nquads(
    statements: list[AnnotatedStatement],
    bundle_base: str = DEFAULT_BUNDLE_BASE,
) -> tuple[str, str]:
    """Returns (N-Quads document, sidecar CSV). One bundle per distinct
    context set."""
    by_bundle: dict[Iri, tuple[tuple[tuple[str, Iri], ...], set[Triple]]] = {}
    for statement in statements:
        pairs = statement.assignment_pairs()
        bundle = _bundle_iri(pairs, bundle_base)
        entry = by_bundle.setdefault(bundle, (pairs, set()))
        entry[1].add(statement.base)
    graphs = [Graph(triples, name=bundle) for bundle, (_, triples) in by_bundle.items()]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["bundle", "dimension", "context"])
    for bundle in sorted(by_bundle, key=lambda b: b.value):
        pairs, _ = by_bundle[bundle]
        for dim, ctx in pairs:
            writer.writerow([bundle.value, dim, ctx.value])
    return serialize_nquads(graphs), out.getvalue()
