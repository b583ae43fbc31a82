import json
import random

import pytest

from fomc.core import (And, Assignment, Classification, Const, Eq, Exists,
                       Or, Rel, Var, Vocabulary)
from fomc.digraph import Digraph
from fomc.engines import eval_brute
from fomc.errors import ParseError
from fomc.generate import (random_digraph, random_sigma_sentence,
                           random_structure)
from fomc.reductions import chain_formula
from fomc.textio import (BENCH_CSV_HEADER, bench_row, infer_vocabulary,
                         parse_digraph, parse_formula, parse_structure,
                         print_digraph, print_formula, print_structure,
                         report_to_dict)

from conftest import FUNC_VOCAB, GRAPH_VOCAB


class TestParseStructure:
    def test_single_edge_graph(self):
        struct = parse_structure("universe 2\nrel E 2\n0 1\n.\n")
        assert struct.universe_size == 2
        assert struct.relations["E"] == frozenset({(0, 1)})

    def test_partial_function_table_rejected(self):
        with pytest.raises(ParseError, match="partial function table"):
            parse_structure("universe 2\nfun f 1\n0 1\n.\n")

    def test_duplicate_symbol_rejected(self):
        with pytest.raises(ParseError, match="duplicate symbol"):
            parse_structure("universe 2\nrel E 2\n.\nrel E 1\n.\n")

    def test_arity_mismatch_rejected(self):
        with pytest.raises(ParseError, match="needs 2 element"):
            parse_structure("universe 2\nrel E 2\n0\n.\n")

    def test_element_out_of_range_rejected(self):
        with pytest.raises(ParseError, match="out of range"):
            parse_structure("universe 2\nrel E 2\n0 2\n.\n")

    def test_missing_terminator_rejected(self):
        with pytest.raises(ParseError, match="missing '.'"):
            parse_structure("universe 2\nrel E 2\n0 1\n")

    def test_comments_and_blank_lines(self):
        text = "# a graph\nuniverse 2\n\nrel E 2  # edges\n0 1\n.\n"
        assert parse_structure(text).relations["E"] == frozenset({(0, 1)})

    def test_round_trip_random(self, rng):
        for _ in range(100):
            struct = random_structure(rng, FUNC_VOCAB, rng.randint(1, 5), rng.random())
            assert parse_structure(print_structure(struct)) == struct


class TestParseFormula:
    def test_exists_conjunction(self):
        phi = parse_formula("EX x. (S(x) & T(x))", GRAPH_VOCAB)
        assert phi == Exists("x", And(Rel("S", (Var("x"),)), Rel("T", (Var("x"),))))

    def test_two_variable_path_step(self):
        text = "EX y. ((y=x | E(x,y)) & EX x. (x=y & T(x)))"
        assert parse_formula(text, GRAPH_VOCAB) == chain_formula(1)

    def test_relation_arity_error(self):
        with pytest.raises(ParseError, match="expects 2 argument"):
            parse_formula("E(x)", GRAPH_VOCAB)

    def test_unknown_symbol(self):
        with pytest.raises(ParseError, match="unknown relation"):
            parse_formula("Q(x)", GRAPH_VOCAB)

    def test_variable_collides_with_symbol(self):
        vocab = Vocabulary(relations=(("E", 2),), constants=("s",))
        with pytest.raises(ParseError, match="collides"):
            parse_formula("EX s. E(s,s)", vocab)

    def test_constant_resolution(self):
        vocab = Vocabulary(relations=(("S", 1),), constants=("c",))
        assert parse_formula("S(c)", vocab) == Rel("S", (Const("c"),))

    def test_error_carries_position(self):
        try:
            parse_formula("EX x. (S(x) &\n  Q(x))", GRAPH_VOCAB)
        except ParseError as exc:
            assert exc.line == 2 and exc.column == 3
        else:
            pytest.fail("expected a parse error")

    def test_infer_vocabulary(self):
        phi, vocab = infer_vocabulary("EX x. (S(x) & E(x,x))")
        assert dict(vocab.relations) == {"S": 1, "E": 2}


class TestPrinting:
    def test_binary_connective_spacing(self):
        phi = And(Rel("S", (Var("x"),)), Rel("T", (Var("x"),)))
        assert print_formula(phi) == "(S(x) & T(x))"

    def test_structure_canonical_order(self):
        vocab = Vocabulary(relations=(("E", 2), ("S", 1)))
        from fomc.core import Structure
        struct = Structure(vocab, 3,
                           {"E": frozenset({(2, 1), (0, 1)}),
                            "S": frozenset({(1,)})}, {}, {})
        text = print_structure(struct)
        assert text == ("universe 3\nrel E 2\n0 1\n2 1\n.\n"
                        "rel S 1\n1\n.\n")

    def test_digraph_round_trip(self):
        graph = parse_digraph("digraph 3\n0 1\n1 2\n.\n")
        assert graph == Digraph(3, frozenset({(0, 1), (1, 2)}))
        assert parse_digraph(print_digraph(graph)) == graph

    def test_formula_reparse_random(self, rng):
        for _ in range(100):
            phi = random_sigma_sentence(
                rng, FUNC_VOCAB, level=rng.choice([0, 1, 2]), max_vars=3,
                target_norm=rng.randint(5, 35), allow_functions=True)
            assert parse_formula(print_formula(phi), FUNC_VOCAB) == phi


class TestReports:
    def test_report_layout(self):
        from conftest import path_structure
        struct = path_structure(2)
        phi = Exists("x", Exists("y", Rel("E", (Var("x"), Var("y")))))
        report = eval_brute(phi, struct)
        payload = report_to_dict(report)
        assert set(payload) == {"answer", "engine", "metrics", "space",
                                "counters", "wallMs"}
        assert set(payload["metrics"]) == {"norm", "width", "vars",
                                           "sigmaLevel", "piLevel"}
        assert set(payload["space"]) == {"peakAccountedBits", "peakDepth"}
        assert set(payload["counters"]) == {"recursiveCalls",
                                            "assignmentsEnumerated"}
        json.dumps(payload)

    def test_csv_header(self):
        assert BENCH_CSV_HEADER == ("family,k,norm,width,universe,engine,"
                                    "answer,peakAccountedBits,peakDepth,wallMs")

    def test_bench_row_shape(self):
        from conftest import path_structure
        struct = path_structure(2)
        phi = Exists("x", Rel("S", (Var("x"),)))
        report = eval_brute(phi, struct)
        from fomc.core import classify
        row = bench_row("chain", 4, classify(phi), 2, "brute", report)
        assert row.count(",") == BENCH_CSV_HEADER.count(",")
        assert row.startswith("chain,4,")
