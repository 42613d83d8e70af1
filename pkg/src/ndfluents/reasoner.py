"""Forward-chaining rule engine over the axiom algebra, plus the
pattern validator.

`saturate` applies subclass/subproperty propagation, domain/range typing,
transitive closure, functional/inverse-functional identity inference, and
the AllValuesFrom-over-partOf rules to a fixpoint. sameAs conclusions are
reported as derived triples but never applied as a congruence: the point of
deriving them here is diagnostic.

Functional and inverse-functional rules only consider pairs of asserted
triples. Derived edges (a transitive partOf hop, a subproperty projection)
are not independent assertions, and counting them would brand every part
chain a functional violation.

`validate` checks conformance of a contextual graph: disjointness of
contexts and parts, functionality of partOf over asserted edges, parts
without partOf or extent, partOf edges into contexts, and the same-extent
rule for statements between parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .terms import OWL, RDF_TYPE, RDFS, Graph, Iri, Literal, Term, Triple
from .vocabulary import (
    ALL_VALUES_FROM_DOMAIN,
    ALL_VALUES_FROM_RANGE,
    CORE,
    Axiom,
    CoreVocabulary,
    DimensionRegistry,
    DISJOINT_CLASSES,
    DOMAIN,
    FUNCTIONAL,
    INVERSE_FUNCTIONAL,
    RANGE,
    RANGE_COMPLEMENT_OF,
    SUB_CLASS_OF,
    SUB_PROPERTY_OF,
    TRANSITIVE,
)

SAME_AS = OWL.sameAs

VIOLATION_DISJOINT = "DisjointClasses"
VIOLATION_FUNCTIONAL = "FunctionalConflict"
VIOLATION_MISSING_PART_OF = "MissingPartOf"
VIOLATION_RANGE_COMPLEMENT = "RangeComplement"
VIOLATION_SAME_EXTENT = "SameExtentRule"


@dataclass(frozen=True)
class Violation:
    kind: str
    subjects: tuple[Term, ...]
    detail: str
    triples: tuple[Triple, ...] = ()

    def render(self) -> str:
        subjects = ", ".join(t.n3() for t in self.subjects)
        lines = [f"{self.kind}: {subjects}: {self.detail}"]
        lines += [f"    {t.n3()}" for t in self.triples]
        return "\n".join(lines)


def _violation_key(v: Violation) -> tuple:
    return (v.kind, tuple(t.n3() for t in v.subjects), v.detail)


@dataclass(frozen=True)
class InferenceResult:
    source: Graph
    derived: Graph
    violations: tuple[Violation, ...]

    @property
    def all(self) -> Graph:
        return self.source.union(self.derived)


class _RuleIndex:
    def __init__(self, axioms: list[Axiom], vocab: CoreVocabulary):
        self.super_classes: dict[Iri, set[Iri]] = {}
        self.super_props: dict[Iri, set[Iri]] = {}
        self.domains: dict[Iri, set[Iri]] = {}
        self.ranges: dict[Iri, set[Iri]] = {}
        self.transitive: set[Iri] = set()
        self.functional: set[Iri] = set()
        self.inverse_functional: set[Iri] = set()
        self.avf_domain: dict[Iri, set[tuple[Iri, Iri]]] = {}
        self.avf_range: dict[Iri, set[tuple[Iri, Iri]]] = {}
        self.disjoint: list[tuple[Iri, Iri]] = []
        for ax in axioms:
            if ax.kind == SUB_CLASS_OF:
                self.super_classes.setdefault(ax.terms[0], set()).add(ax.terms[1])
            elif ax.kind == SUB_PROPERTY_OF:
                self.super_props.setdefault(ax.terms[0], set()).add(ax.terms[1])
            elif ax.kind == DOMAIN:
                self.domains.setdefault(ax.terms[0], set()).add(ax.terms[1])
            elif ax.kind == RANGE:
                self.ranges.setdefault(ax.terms[0], set()).add(ax.terms[1])
            elif ax.kind == RANGE_COMPLEMENT_OF:
                pass  # enforced by validate()'s pattern checks, not a forward rule

            elif ax.kind == TRANSITIVE:
                self.transitive.add(ax.terms[0])
            elif ax.kind == FUNCTIONAL:
                self.functional.add(ax.terms[0])
            elif ax.kind == INVERSE_FUNCTIONAL:
                self.inverse_functional.add(ax.terms[0])
            elif ax.kind == ALL_VALUES_FROM_DOMAIN:
                self.avf_domain.setdefault(ax.terms[0], set()).add((ax.terms[1], ax.terms[2]))
            elif ax.kind == ALL_VALUES_FROM_RANGE:
                self.avf_range.setdefault(ax.terms[0], set()).add((ax.terms[1], ax.terms[2]))
            elif ax.kind == DISJOINT_CLASSES:
                self.disjoint.append((ax.terms[0], ax.terms[1]))
        # Properties in the partOf family: functional conflicts on these are
        # pattern violations, not identity inferences (a part has one whole).
        self.part_of_family = self._family(vocab.contextualPartOf)

    def _family(self, root: Iri) -> set[Iri]:
        family = {root}
        changed = True
        while changed:
            changed = False
            for sub, supers in self.super_props.items():
                if sub not in family and supers & family:
                    family.add(sub)
                    changed = True
        return family


def saturate(
    graph: Graph,
    axioms: list[Axiom],
    vocab: CoreVocabulary = CORE,
) -> InferenceResult:
    idx = _RuleIndex(axioms, vocab)
    asserted = frozenset(graph)
    everything: set[Triple] = set(asserted)
    sp: dict[tuple[Iri, Term], set[Term]] = {}
    po: dict[tuple[Iri, Term], set[Term]] = {}
    violations: dict[tuple, Violation] = {}

    def index(t: Triple) -> None:
        sp.setdefault((t.predicate, t.subject), set()).add(t.object)
        po.setdefault((t.predicate, t.object), set()).add(t.subject)

    for t in everything:
        index(t)

    def check_functional(t: Triple) -> list[Triple]:
        out: list[Triple] = []
        p = t.predicate
        if p in idx.functional and t in asserted:
            for other in sp.get((p, t.subject), ()):
                if other == t.object or Triple(t.subject, p, other) not in asserted:
                    continue
                if p in idx.part_of_family:
                    v = Violation(
                        VIOLATION_FUNCTIONAL,
                        (t.subject,),
                        f"{p.n3()} is functional but has multiple values",
                        tuple(sorted((t, Triple(t.subject, p, other)), key=Triple.sort_key)),
                    )
                    violations.setdefault(_violation_key(v), v)
                elif not isinstance(other, Literal) and not isinstance(t.object, Literal):
                    out.append(Triple(t.object, SAME_AS, other))
                    out.append(Triple(other, SAME_AS, t.object))
        if p in idx.inverse_functional and t in asserted:
            for other in po.get((p, t.object), ()):
                if other == t.subject or Triple(other, p, t.object) not in asserted:
                    continue
                out.append(Triple(t.subject, SAME_AS, other))
                out.append(Triple(other, SAME_AS, t.subject))
        return out

    def apply_rules(t: Triple) -> list[Triple]:
        out: list[Triple] = []
        s, p, o = t.subject, t.predicate, t.object
        if p == RDF_TYPE and isinstance(o, Iri):
            for sup in idx.super_classes.get(o, ()):
                out.append(Triple(s, RDF_TYPE, sup))
        for sup in idx.super_props.get(p, ()):
            out.append(Triple(s, sup, o))
        for cls in idx.domains.get(p, ()):
            out.append(Triple(s, RDF_TYPE, cls))
        if not isinstance(o, Literal):
            for cls in idx.ranges.get(p, ()):
                out.append(Triple(o, RDF_TYPE, cls))
        if p in idx.transitive and not isinstance(o, Literal):
            for z in sp.get((p, o), ()):
                out.append(Triple(s, p, z))
            for w in po.get((p, s), ()):
                out.append(Triple(w, p, o))
        for via, cls in idx.avf_domain.get(p, ()):
            for z in sp.get((via, s), ()):
                if not isinstance(z, Literal):
                    out.append(Triple(z, RDF_TYPE, cls))
        if not isinstance(o, Literal):
            for via, cls in idx.avf_range.get(p, ()):
                for z in sp.get((via, o), ()):
                    if not isinstance(z, Literal):
                        out.append(Triple(z, RDF_TYPE, cls))
        # the new triple may be the `via` edge of an AllValuesFrom axiom
        for prop, pairs in idx.avf_domain.items():
            for via, cls in pairs:
                if via == p and sp.get((prop, s)) and not isinstance(o, Literal):
                    out.append(Triple(o, RDF_TYPE, cls))
        for prop, pairs in idx.avf_range.items():
            for via, cls in pairs:
                if via == p and po.get((prop, s)) and not isinstance(o, Literal):
                    out.append(Triple(o, RDF_TYPE, cls))
        out.extend(check_functional(t))
        return out

    delta = set(everything)
    while delta:
        fresh: set[Triple] = set()
        for t in sorted(delta, key=Triple.sort_key):
            for candidate in apply_rules(t):
                if candidate not in everything and candidate not in fresh:
                    fresh.add(candidate)
        for t in fresh:
            index(t)
        everything |= fresh
        delta = fresh

    for a, b in idx.disjoint:
        offenders = {
            s for s in po.get((RDF_TYPE, a), set()) & po.get((RDF_TYPE, b), set())
        }
        for s in sorted(offenders, key=lambda x: x.n3()):
            v = Violation(
                VIOLATION_DISJOINT,
                (s,),
                f"typed both {a.n3()} and {b.n3()}, which are disjoint",
                (Triple(s, RDF_TYPE, a), Triple(s, RDF_TYPE, b)),
            )
            violations.setdefault(_violation_key(v), v)

    derived = Graph(everything - set(asserted))
    ordered = tuple(sorted(violations.values(), key=_violation_key))
    return InferenceResult(graph, derived, ordered)


# --- validation ---------------------------------------------------------------


@dataclass
class _PatternProps:
    part_of: set[Iri] = field(default_factory=set)
    extents: set[Iri] = field(default_factory=set)
    part_classes: set[Iri] = field(default_factory=set)
    context_classes: set[Iri] = field(default_factory=set)


def _pattern_props(registry: DimensionRegistry, vocab: CoreVocabulary) -> _PatternProps:
    props = _PatternProps()
    dims = list(registry)
    for dim in dims:
        props.part_of.add(dim.part_of)
        props.extents.add(dim.extent)
        props.part_classes.add(dim.part_class)
        props.context_classes.add(dim.context_class)
    for size in range(2, len(dims) + 1):
        for combo in combinations(sorted(d.name for d in dims), size):
            combined = registry.combined(list(combo))
            props.part_of.add(combined.part_of)
            props.extents.add(combined.extent)
            props.part_classes.add(combined.part_class)
            props.context_classes.add(combined.context_class)
    props.part_of.add(vocab.contextualPartOf)
    props.extents.add(vocab.contextualExtent)
    props.part_classes.add(vocab.ContextualPart)
    props.context_classes.add(vocab.Context)
    return props


def validate(
    graph: Graph,
    axioms: list[Axiom],
    registry: DimensionRegistry,
    vocab: CoreVocabulary = CORE,
    *,
    same_extent: bool = True,
) -> list[Violation]:
    props = _pattern_props(registry, vocab)
    result = saturate(graph, axioms, vocab)
    saturated = result.all
    violations: dict[tuple, Violation] = {
        _violation_key(v): v for v in result.violations
    }

    types: dict[Term, set[Iri]] = {}
    for t in saturated.match(predicate=RDF_TYPE):
        if isinstance(t.object, Iri):
            types.setdefault(t.subject, set()).add(t.object)

    part_of_edges: dict[Term, dict[Iri, set[Term]]] = {}
    extent_edges: dict[Term, dict[Iri, set[Term]]] = {}
    for t in graph:
        if t.predicate in props.part_of:
            part_of_edges.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
        elif t.predicate in props.extents:
            extent_edges.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)

    def add(v: Violation) -> None:
        violations.setdefault(_violation_key(v), v)

    # Context and ContextualPart are disjoint even when the caller passed no
    # axioms: the check defines pattern conformance.
    for resource, classes in types.items():
        if vocab.Context in classes and vocab.ContextualPart in classes:
            add(Violation(
                VIOLATION_DISJOINT,
                (resource,),
                f"typed both {vocab.Context.n3()} and {vocab.ContextualPart.n3()}, which are disjoint",
                (Triple(resource, RDF_TYPE, vocab.Context),
                 Triple(resource, RDF_TYPE, vocab.ContextualPart)),
            ))

    # Functionality of partOf over asserted edges, per property.
    for part, by_prop in sorted(part_of_edges.items(), key=lambda kv: kv[0].n3()):
        for prop, targets in sorted(by_prop.items()):
            if len(targets) > 1:
                cited = tuple(sorted((Triple(part, prop, o) for o in targets), key=Triple.sort_key))
                add(Violation(
                    VIOLATION_FUNCTIONAL,
                    (part,),
                    f"{prop.n3()} is functional but has {len(targets)} values",
                    cited,
                ))

    # Parts must have a partOf edge.
    for resource, classes in sorted(types.items(), key=lambda kv: kv[0].n3()):
        if classes & props.part_classes and resource not in part_of_edges:
            add(Violation(
                VIOLATION_MISSING_PART_OF,
                (resource,),
                "typed as a contextual part but carries no partOf edge",
                tuple(Triple(resource, RDF_TYPE, c) for c in sorted(classes & props.part_classes)),
            ))

    # partOf must not point into a context.
    for part, by_prop in sorted(part_of_edges.items(), key=lambda kv: kv[0].n3()):
        for prop, targets in sorted(by_prop.items()):
            for target in sorted(targets, key=lambda x: x.n3()):
                if types.get(target, set()) & ({vocab.Context} | props.context_classes):
                    add(Violation(
                        VIOLATION_RANGE_COMPLEMENT,
                        (part, target),
                        f"{prop.n3()} points at a context individual",
                        (Triple(part, prop, target),),
                    ))

    if same_extent:
        scaffolding = props.part_of | props.extents | {
            RDF_TYPE, RDFS.subPropertyOf, RDFS.subClassOf, SAME_AS,
            vocab.memberContext,
        }
        def is_part(r: Term) -> bool:
            return r in part_of_edges or bool(types.get(r, set()) & props.part_classes)

        for t in graph.sorted_triples():
            if t.predicate in scaffolding:
                continue
            if not (is_part(t.subject) and is_part(t.object)):
                continue
            subject_extents = extent_edges.get(t.subject, {})
            object_extents = extent_edges.get(t.object, {})
            for prop in sorted(set(subject_extents) & set(object_extents)):
                if subject_extents[prop] != object_extents[prop]:
                    add(Violation(
                        VIOLATION_SAME_EXTENT,
                        (t.subject, t.object),
                        f"linked parts disagree on {prop.n3()}",
                        (t,),
                    ))

    return sorted(violations.values(), key=_violation_key)
