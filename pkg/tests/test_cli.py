"""End-to-end command-line tests driven through `main(argv)`."""

import json
import logging

import pytest

from conftest import EX

from ndfluents import (
    RDF,
    XSD,
    CombinationModel,
    Iri,
    Literal,
    MintingPolicy,
    Triple,
    annotate,
    contextualize,
    default_config,
    write_statements_csv,
)
from ndfluents.cli import main
from ndfluents.parser import parse_ntriples, parse_turtle
from ndfluents.serializer import serialize_ntriples
from ndfluents.vocabulary import (
    CORE,
    axioms_from_graph,
    functional,
    temporal_dimension,
    transitive,
)

FIXTURE_CSV = "fixtures/world_population.csv"


@pytest.fixture
def statements():
    return [
        annotate(EX.Paris, EX.capitalOf, EX.France, ("temporal", EX.year508)),
        annotate(
            EX.Paris,
            EX.capitalOf,
            EX.France,
            ("temporal", EX.year2016),
            ("provenance", EX.dbpedia),
        ),
    ]


@pytest.fixture
def statements_csv(tmp_path, statements):
    path = tmp_path / "statements.csv"
    path.write_text(write_statements_csv(statements), encoding="utf-8")
    return path


@pytest.fixture
def graph_file(tmp_path, statements):
    config = default_config()
    graph = contextualize(
        statements, config.registry, CombinationModel.multi_context(), MintingPolicy()
    )
    path = tmp_path / "graph.nt"
    path.write_text(serialize_ntriples(graph), encoding="utf-8")
    return path


class TestGenOntology:
    def test_stdout_turtle(self, capsys):
        assert main(["gen-ontology"]) == 0
        out = capsys.readouterr().out
        assert "@prefix nd:" in out
        axioms = axioms_from_graph(parse_turtle(out))
        assert functional(CORE.contextualPartOf) in axioms
        assert transitive(CORE.contextualPartOf) not in axioms

    def test_split_writes_one_file_per_module(self, tmp_path, capsys):
        out_dir = tmp_path / "modules"
        assert main(["gen-ontology", "--split", str(out_dir)]) == 0
        names = sorted(p.name for p in out_dir.iterdir())
        assert names == [
            "core.ttl",
            "datatype.ttl",
            "dimension-provenance.ttl",
            "dimension-temporal.ttl",
            "restrictions-provenance.ttl",
            "restrictions-temporal.ttl",
        ]

    def test_nested_model_adds_transitivity_module(self, tmp_path):
        config = tmp_path / "run.ini"
        config.write_text("[core]\nmodel = a\n", encoding="utf-8")
        out_dir = tmp_path / "modules"
        assert main(["gen-ontology", "-c", str(config), "--split", str(out_dir)]) == 0
        text = (out_dir / "transitivity.ttl").read_text(encoding="utf-8")
        assert transitive(CORE.contextualPartOf) in axioms_from_graph(parse_turtle(text))

    def test_combined_model_adds_combined_modules(self, tmp_path):
        config = tmp_path / "run.ini"
        config.write_text("[core]\nmodel = c\n", encoding="utf-8")
        out_dir = tmp_path / "modules"
        assert main(["gen-ontology", "-c", str(config), "--split", str(out_dir)]) == 0
        names = {p.name for p in out_dir.iterdir()}
        assert {"combined-extent.ttl", "combined-provenance-temporal.ttl"} <= names
        text = (out_dir / "combined-extent.ttl").read_text(encoding="utf-8")
        assert functional(CORE.contextualExtent) in axioms_from_graph(parse_turtle(text))

    def test_ntriples_output(self, tmp_path):
        out = tmp_path / "tbox.nt"
        assert main(["gen-ontology", "-o", str(out), "--format", "ntriples"]) == 0
        graph = parse_ntriples(out.read_text(encoding="utf-8"))
        assert len(graph) > 0


class TestIngestAndStats:
    def test_ingest_writes_statement_csv(self, capsys):
        assert main(["ingest-csv", FIXTURE_CSV]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[0] == "subject,predicate,object,objectType,dim1,ctx1,dim2,ctx2"
        assert len(lines) == 1 + 19
        assert all("provenance" in line and "temporal" in line for line in lines[1:])

    def test_ingest_descriptions_graph(self, tmp_path, capsys):
        desc = tmp_path / "desc.ttl"
        assert main(["ingest-csv", FIXTURE_CSV, "--descriptions", str(desc)]) == 0
        graph = parse_turtle(desc.read_text(encoding="utf-8"))
        years = graph.match(predicate=Iri("http://www.w3.org/2006/time#year"))
        assert {t.object.lexical for t in years} == {
            "-400",
            "0",
            "1000",
            "1500",
            "1900",
        }

    def test_stats_table(self, statements_csv, capsys):
        assert main(["stats", str(statements_csv)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "representation,model,triples"
        rows = [line.split(",") for line in lines[1:]]
        assert [(r[0], r[1]) for r in rows] == [
            ("ndfluents", "contexts-in-context"),
            ("ndfluents", "multi-context"),
            ("ndfluents", "combined-extent"),
            ("reification", ""),
            ("singleton", ""),
        ]
        counts = {(r[0], r[1]): int(r[2]) for r in rows}
        assert counts[("reification", "")] == (4 + 1) + (4 + 2)
        assert counts[("singleton", "")] == (2 + 1) + (2 + 2)


class TestContextualizeRoundTrip:
    def test_contextualize_to_turtle_stdout(self, statements_csv, capsys):
        assert main(["contextualize", str(statements_csv)]) == 0
        out = capsys.readouterr().out
        graph = parse_turtle(out)
        parts = list(graph.match(predicate=RDF.type, obj=CORE.ContextualPart))
        assert not parts  # parts carry dimension part classes, not the superclass
        assert list(graph.match(predicate=temporal_dimension().part_of, obj=EX.Paris))

    def test_round_trip_is_byte_identical(self, tmp_path, statements_csv, capsys):
        graph_path = tmp_path / "graph.ttl"
        assert main(["contextualize", str(statements_csv), "-o", str(graph_path)]) == 0
        back = tmp_path / "back.csv"
        assert main(["decontextualize", str(graph_path), "-o", str(back)]) == 0
        assert back.read_bytes() == statements_csv.read_bytes()

    def test_out_format_ntriples(self, tmp_path, statements_csv):
        graph_path = tmp_path / "graph.any"
        assert (
            main(
                [
                    "contextualize",
                    str(statements_csv),
                    "-o",
                    str(graph_path),
                    "--out-format",
                    "ntriples",
                ]
            )
            == 0
        )
        assert parse_ntriples(graph_path.read_text(encoding="utf-8"))

    def test_merge_unions_graphs(self, tmp_path, statements_csv, capsys):
        extra = tmp_path / "extra.nt"
        extra.write_text(
            "<http://example.org/Paris> <http://example.org/pop> "
            '"2200000"^^<http://www.w3.org/2001/XMLSchema#integer> .\n',
            encoding="utf-8",
        )
        assert main(["contextualize", str(statements_csv), "--merge", str(extra)]) == 0
        merged = parse_turtle(capsys.readouterr().out)
        assert Triple(EX.Paris, EX.pop, Literal("2200000", XSD.integer)) in merged

    def test_context_selection(self, tmp_path, statements_csv, capsys):
        graph_path = tmp_path / "graph.ttl"
        assert main(["contextualize", str(statements_csv), "-o", str(graph_path)]) == 0
        assert (
            main(
                [
                    "decontextualize",
                    str(graph_path),
                    "--context",
                    EX.year508.value,
                ]
            )
            == 0
        )
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2  # header + the single year-508 statement
        assert "year508" in lines[1]

    def test_nquads_bundle_round_trip(self, tmp_path, statements_csv):
        bundles = tmp_path / "bundles.nq"
        sidecar = tmp_path / "bundles.contexts.csv"
        csv_text = statements_csv.read_text(encoding="utf-8")
        assert (
            main(
                [
                    "decontextualize",
                    "--format",
                    "nquads",
                    "--sidecar",
                    str(sidecar),
                    "-o",
                    str(bundles),
                    str(_contextualized(tmp_path, statements_csv)),
                ]
            )
            == 0
        )
        back = tmp_path / "back.csv"
        assert (
            main(
                [
                    "contextualize",
                    str(bundles),
                    "--format",
                    "nquads",
                    "--sidecar",
                    str(sidecar),
                    "-o",
                    str(tmp_path / "graph2.ttl"),
                ]
            )
            == 0
        )
        assert (
            main(["decontextualize", str(tmp_path / "graph2.ttl"), "-o", str(back)])
            == 0
        )
        assert back.read_text(encoding="utf-8") == csv_text


def _contextualized(tmp_path, statements_csv):
    graph_path = tmp_path / "for-bundles.ttl"
    assert main(["contextualize", str(statements_csv), "-o", str(graph_path)]) == 0
    return graph_path


class TestValidate:
    def test_clean_graph_exits_zero(self, graph_file, capsys):
        assert main(["validate", str(graph_file)]) == 0
        assert capsys.readouterr().out == ""

    def test_violations_exit_one_and_report(self, tmp_path, graph_file, capsys):
        bad = tmp_path / "bad.nt"
        bad.write_text(
            graph_file.read_text(encoding="utf-8")
            + "<http://example.org/stray> "
            "<http://purl.org/NET/ndfluents/4dFluents#temporalPartOf> "
            "<http://example.org/year508> .\n",
            encoding="utf-8",
        )
        report = tmp_path / "violations.json"
        assert main(["validate", str(bad), "--report", str(report)]) == 1
        out = capsys.readouterr().out
        assert "MissingPartOf" in out or "RangeComplement" in out
        entries = json.loads(report.read_text(encoding="utf-8"))
        assert entries and all(
            {"kind", "subjects", "detail", "triples"} <= set(e) for e in entries
        )

    def test_no_same_extent_silences_extent_mismatch(self, tmp_path, statements_csv, capsys):
        graph_path = tmp_path / "graph.nt"
        assert (
            main(
                [
                    "contextualize",
                    str(statements_csv),
                    "-o",
                    str(graph_path),
                    "--out-format",
                    "ntriples",
                ]
            )
            == 0
        )
        # Link the two Paris parts, whose temporal extents differ.
        config = default_config()
        graph = parse_ntriples(graph_path.read_text(encoding="utf-8"))
        parts = sorted(
            {
                t.subject
                for t in graph.match(predicate=temporal_dimension().part_of, obj=EX.Paris)
            },
            key=lambda term: term.n3(),
        )
        assert len(parts) == 2
        with graph_path.open("a", encoding="utf-8") as handle:
            handle.write(f"{parts[0].n3()} <http://example.org/knows> {parts[1].n3()} .\n")
        assert main(["validate", str(graph_path)]) == 1
        assert "SameExtent" in capsys.readouterr().out
        assert main(["validate", str(graph_path), "--no-same-extent"]) == 0


class TestReason:
    def test_derived_only_output(self, graph_file, capsys):
        assert main(["reason", "--derived-only", str(graph_file)]) == 0
        derived = parse_turtle(capsys.readouterr().out)
        # Dimension part classes sit below the generic contextual-part class.
        assert list(derived.match(predicate=RDF.type, obj=CORE.ContextualPart))
        # Source triples are not repeated.
        assert not list(derived.match(predicate=temporal_dimension().extent))

    def test_full_output_includes_source(self, graph_file, capsys):
        assert main(["reason", str(graph_file)]) == 0
        full = parse_turtle(capsys.readouterr().out)
        assert list(full.match(predicate=temporal_dimension().extent))
        assert list(full.match(predicate=RDF.type, obj=CORE.ContextualPart))

    def test_extra_tbox_file(self, tmp_path, graph_file, capsys):
        from ndfluents.vocabulary import axioms_to_graph, sub_class_of

        tbox = tmp_path / "extra.ttl"
        extra = axioms_to_graph([sub_class_of(CORE.Context, EX.Thing)])
        tbox.write_text(serialize_ntriples(extra), encoding="utf-8")
        assert (
            main(
                [
                    "reason",
                    "--derived-only",
                    "--tbox",
                    str(tbox),
                    str(graph_file),
                ]
            )
            == 0
        )
        derived = parse_turtle(capsys.readouterr().out)
        assert list(derived.match(obj=EX.Thing))


class TestQuery:
    def test_pattern_to_csv(self, tmp_path, graph_file, capsys):
        pattern = tmp_path / "pattern.rq"
        pattern.write_text(
            "PREFIX 4d: <http://purl.org/NET/ndfluents/4dFluents#>\n"
            "?part 4d:temporalPartOf ?entity .\n"
            "GROUP BY ?entity\n"
            "AGG COUNT ?part AS parts\n",
            encoding="utf-8",
        )
        assert main(["query", str(graph_file), "--pattern", str(pattern)]) == 0
        # Both Paris (subject) and France (object) carry one part per context set.
        assert capsys.readouterr().out == (
            "entity,parts\n"
            "http://example.org/France,2\n"
            "http://example.org/Paris,2\n"
        )

    def test_out_file(self, tmp_path, graph_file):
        pattern = tmp_path / "pattern.rq"
        pattern.write_text("?s ?p ?o .\nAGG COUNT ?s AS n\n", encoding="utf-8")
        out = tmp_path / "result.csv"
        assert main(["query", str(graph_file), "--pattern", str(pattern), "-o", str(out)]) == 0
        rows = out.read_text(encoding="utf-8").splitlines()
        assert rows[0] == "n"
        assert int(rows[1]) == len(parse_ntriples(graph_file.read_text(encoding="utf-8")))

    def test_population_pipeline(self, tmp_path, capsys):
        statements = tmp_path / "population.csv"
        descriptions = tmp_path / "descriptions.ttl"
        graph = tmp_path / "population.ttl"
        assert (
            main(
                [
                    "ingest-csv",
                    FIXTURE_CSV,
                    "-o",
                    str(statements),
                    "--descriptions",
                    str(descriptions),
                ]
            )
            == 0
        )
        assert (
            main(
                [
                    "contextualize",
                    str(statements),
                    "--merge",
                    str(descriptions),
                    "-o",
                    str(graph),
                ]
            )
            == 0
        )
        pattern = tmp_path / "pattern.rq"
        pattern.write_text(
            "PREFIX nd: <http://purl.org/NET/ndfluents#>\n"
            "PREFIX 4d: <http://purl.org/NET/ndfluents/4dFluents#>\n"
            "PREFIX time: <http://www.w3.org/2006/time#>\n"
            "PREFIX dbo: <http://dbpedia.org/ontology/>\n"
            "?part dbo:populationTotal ?pop .\n"
            "?part 4d:temporalExtent ?interval .\n"
            "?interval time:intervalDuring ?spec .\n"
            "?spec time:hasDateTimeDescription ?desc .\n"
            "?desc time:year ?year .\n"
            "GROUP BY ?year\n"
            "AGG AVG ?pop AS avg_population\n"
            "AGG COUNT DISTINCT ?part AS estimates\n",
            encoding="utf-8",
        )
        assert main(["query", str(graph), "--pattern", str(pattern)]) == 0
        assert capsys.readouterr().out == (
            "year,avg_population,estimates\n"
            "-400,159033333.33,3\n"
            "0,228375000.00,4\n"
            "1000,281000000.00,4\n"
            "1500,459300000.00,4\n"
            "1900,1648000000.00,4\n"
        )


class TestErrorPaths:
    def test_missing_file(self, capsys):
        assert main(["validate", "no/such/file.ttl"]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_no_command_prints_usage(self, capsys):
        assert main([]) == 2
        assert "usage:" in capsys.readouterr().err

    def test_unknown_statement_format_rejected_by_argparse(self, statements_csv, capsys):
        assert main(["contextualize", str(statements_csv), "--format", "xml"]) == 2

    def test_bad_in_format(self, graph_file, capsys):
        assert main(["validate", str(graph_file), "--in-format", "rdfxml"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_malformed_graph_names_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.nt"
        bad.write_text("<http://a> <http://b> .\n", encoding="utf-8")
        assert main(["validate", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "error:" in err and "bad.nt" in err

    def test_malformed_pattern(self, tmp_path, graph_file, capsys):
        pattern = tmp_path / "pattern.rq"
        pattern.write_text("GROUP BY ?ghost\n", encoding="utf-8")
        assert main(["query", str(graph_file), "--pattern", str(pattern)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_bad_config(self, tmp_path, capsys):
        config = tmp_path / "run.ini"
        config.write_text("[core]\nmodel = quantum\n", encoding="utf-8")
        assert main(["gen-ontology", "-c", str(config)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_nquads_without_sidecar(self, tmp_path, graph_file, capsys):
        assert (
            main(["decontextualize", str(graph_file), "--format", "nquads"]) == 2
        )
        assert "sidecar" in capsys.readouterr().err

    def test_verbose_logs_progress(self, statements_csv, caplog):
        with caplog.at_level(logging.INFO, logger="ndfluents"):
            assert main(["-v", "contextualize", str(statements_csv), "-o", "/dev/null"]) == 0
        assert any("contextualized" in record.message for record in caplog.records)
