"""Shared fixtures and the randomized-corpus generator used across the suite."""

from __future__ import annotations

import random

import pytest

from ndfluents import (
    AnnotatedStatement,
    DimensionRegistry,
    Literal,
    Namespace,
    XSD,
    annotate,
    conventional_dimension,
    provenance_dimension,
    temporal_dimension,
)

EX = Namespace("http://example.org/")

# Three dimensions give the corpus generator its "up to three dimensions"
# head-room; "trust" exercises the conventional naming path.
CORPUS_DIMENSIONS = (
    temporal_dimension(),
    provenance_dimension(),
    conventional_dimension("trust"),
)

_ENTITIES = ("Alpha", "Beta", "Gamma", "Delta", "Epsilon", "Zeta")
_PREDICATES = ("knows", "locatedIn", "memberOf", "ownedBy")
_DATA_PREDICATES = ("population", "label", "score")


def corpus_registry() -> DimensionRegistry:
    return DimensionRegistry(list(CORPUS_DIMENSIONS))


def random_corpus(rng: random.Random, serial: int) -> list[AnnotatedStatement]:
    """Up to 10 annotated statements over up to 3 dimensions.

    Every (statement, dimension) pair gets its own freshly minted context
    IRI with a corpus-unique local name, so no two statements share a
    context and suffix minting cannot collide.
    """
    dims = rng.sample([d.name for d in CORPUS_DIMENSIONS], rng.randint(1, 3))
    statements = []
    for i in range(rng.randint(1, 10)):
        subject = EX[rng.choice(_ENTITIES)]
        if rng.random() < 0.3:
            predicate = EX[rng.choice(_DATA_PREDICATES)]
            obj = rng.choice(
                [
                    Literal(str(rng.randint(-5, 100)), datatype=XSD.integer),
                    Literal(rng.choice(("red", "green", "blue"))),
                    Literal("bonjour", language="fr"),
                ]
            )
        else:
            predicate = EX[rng.choice(_PREDICATES)]
            obj = EX[rng.choice(_ENTITIES)]
        chosen = rng.sample(dims, rng.randint(1, len(dims)))
        assignments = [
            (name, EX[f"ctx{serial}s{i}{name}"]) for name in sorted(chosen)
        ]
        statements.append(annotate(subject, predicate, obj, *assignments))
    return statements


@pytest.fixture
def temporal_registry() -> DimensionRegistry:
    return DimensionRegistry([temporal_dimension()])


@pytest.fixture
def two_dim_registry() -> DimensionRegistry:
    return DimensionRegistry([temporal_dimension(), provenance_dimension()])


@pytest.fixture
def full_registry() -> DimensionRegistry:
    return corpus_registry()


@pytest.fixture
def paris_statement() -> AnnotatedStatement:
    """One object statement with one temporal context."""
    return annotate(EX.Paris, EX.capitalOf, EX.France, ("temporal", EX.year508))
