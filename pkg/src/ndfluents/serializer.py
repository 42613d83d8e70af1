"""Canonical serializers for N-Triples, N-Quads, and Turtle.

Output is deterministic: triples are sorted lexicographically by their
N-Triples tokens, Turtle groups consecutive triples sharing a subject with
`;` (and shared predicates with `,`) without changing that order, and line
endings are always LF. Serializing the same graph twice yields identical
bytes, which makes generated ontology files diffable.
"""

from __future__ import annotations

import re
from collections.abc import Iterable

from .parser import NQUADS, NTRIPLES, TURTLE, normalize_format
from .terms import BlankNode, Graph, Iri, Literal, Term, Triple

# Local names that can appear after `prefix:` without escaping. Anything
# else falls back to the full <...> form rather than risking invalid Turtle.
_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")


def _blind_key(term: Term) -> str:
    # All blanks collapse to the bare "_:" token so input labels cannot
    # steer the canonical order; they only break ties via the full key.
    return "_:" if isinstance(term, BlankNode) else term.n3()


def _relabel_sorted(graph: Graph) -> Graph:
    """Relabel blanks _:b0, _:b1, ... in first-occurrence order of the
    graph's canonical serialization, ordering triples as if blank labels
    were invisible."""
    ordered = sorted(
        graph,
        key=lambda t: (_blind_key(t.subject), t.predicate.n3(), _blind_key(t.object))
        + t.sort_key(),
    )
    mapping: dict[BlankNode, BlankNode] = {}
    for triple in ordered:
        for term in (triple.subject, triple.object):
            if isinstance(term, BlankNode) and term not in mapping:
                mapping[term] = BlankNode(f"b{len(mapping)}")
    if all(old == new for old, new in mapping.items()):
        return graph

    def sub(term: Term) -> Term:
        return mapping[term] if isinstance(term, BlankNode) else term

    return Graph(
        (Triple(sub(t.subject), t.predicate, sub(t.object)) for t in graph),
        name=graph.name,
    )


def canonicalize(graph: Graph) -> Graph:
    """Return the graph with canonical blank labels: serializing it and
    parsing the result gives back the same graph."""
    current = graph
    # Converges immediately in practice; the bound guards against a labeling
    # that never stabilizes, which would break round-trip guarantees.
    for _ in range(8 + sum(1 for t in graph for x in (t.subject, t.object)
                           if isinstance(x, BlankNode))):
        relabeled = _relabel_sorted(current)
        if relabeled == current:
            return current
        current = relabeled
    raise RuntimeError("blank node relabeling did not converge")


def serialize_ntriples(graph: Graph) -> str:
    lines = [triple.n3() + "\n" for triple in graph.sorted_triples()]
    return "".join(lines)


def serialize_nquads(graphs: Iterable[Graph]) -> str:
    """Serialize graphs as N-Quads, default graph first, named graphs by name."""
    graph_list = sorted(graphs, key=lambda g: "" if g.name is None else g.name.value)
    out: list[str] = []
    for graph in graph_list:
        suffix = "" if graph.name is None else f" {graph.name.n3()}"
        for triple in graph.sorted_triples():
            out.append(
                f"{triple.subject.n3()} {triple.predicate.n3()} "
                f"{triple.object.n3()}{suffix} .\n"
            )
    return "".join(out)


def _split_iri(iri: Iri) -> tuple[str, str]:
    value = iri.value
    cut = value.rfind("#")
    if cut == -1:
        cut = value.rfind("/")
    if cut == -1:
        return value, ""
    return value[: cut + 1], value[cut + 1 :]


class _TurtleAbbreviator:
    def __init__(self, prefixes: dict[str, str]):
        self.by_base = {base: name for name, base in prefixes.items()}
        self.used: set[str] = set()

    def token(self, term: Term, *, as_predicate: bool = False) -> str:
        from .terms import RDF_TYPE

        if as_predicate and term == RDF_TYPE:
            return "a"
        if isinstance(term, Iri):
            base, local = _split_iri(term)
            name = self.by_base.get(base)
            if name is not None and _SAFE_LOCAL_RE.match(local) and not local.endswith("."):
                self.used.add(name)
                return f"{name}:{local}"
            return term.n3()
        if isinstance(term, Literal) and term.datatype is not None and term.language is None:
            dt_token = self.token(term.datatype)
            if dt_token != term.datatype.n3():
                plain = term.n3()
                if plain.endswith(term.datatype.n3()):
                    return plain[: -len(term.datatype.n3())] + dt_token
        return term.n3()


def serialize_turtle(graph: Graph, prefixes: dict[str, str] | None = None) -> str:
    """Serialize as Turtle with subject grouping, preserving canonical order."""
    prefixes = dict(prefixes or {})
    abbr = _TurtleAbbreviator(prefixes)

    blocks: list[list[str]] = []
    current_subject: Term | None = None
    lines: list[str] = []
    prev_predicate: Term | None = None
    for triple in graph.sorted_triples():
        if triple.subject != current_subject:
            if lines:
                blocks.append(lines)
            current_subject = triple.subject
            prev_predicate = None
            lines = [abbr.token(triple.subject)]
        if triple.predicate == prev_predicate:
            lines[-1] += " ,"
            lines.append(f"        {abbr.token(triple.object)}")
        else:
            if prev_predicate is not None:
                lines[-1] += " ;"
            pred_token = abbr.token(triple.predicate, as_predicate=True)
            lines.append(f"    {pred_token} {abbr.token(triple.object)}")
            prev_predicate = triple.predicate
    if lines:
        blocks.append(lines)

    header = [
        f"@prefix {name}: <{base}> .\n"
        for name, base in sorted(prefixes.items())
        if name in abbr.used or not blocks
    ]
    body: list[str] = []
    for block in blocks:
        block[-1] += " ."
        body.append("\n".join(block) + "\n")
    sep = "\n" if header and body else ""
    return "".join(header) + sep + "\n".join(body)


def serialize(
    data: Graph | Iterable[Graph],
    fmt: str,
    prefixes: dict[str, str] | None = None,
) -> str:
    """Serialize a graph (or graphs, for N-Quads) in the named format."""
    fmt = normalize_format(fmt)
    if fmt == NQUADS:
        graphs = [data] if isinstance(data, Graph) else list(data)
        return serialize_nquads(graphs)
    if isinstance(data, Graph):
        graph = data
    else:
        items = list(data)
        if len(items) != 1:
            raise ValueError(f"{fmt} holds exactly one graph, got {len(items)}")
        graph = items[0]
    if fmt == NTRIPLES:
        return serialize_ntriples(graph)
    return serialize_turtle(graph, prefixes=prefixes)
