import itertools
import math
import random

import pytest

from fomc.core import (And, Assignment, Const, Eq, Exists, Forall, Not, Or,
                       Rel, Structure, Var, Vocabulary, classify, free_vars,
                       nnf, num_variables, subformula_at, subformula_count,
                       width)
from fomc.engines import (SpaceMeter, build_guarded, ceil_log2,
                          dnc_bits_cap, dnc_depth_cap, eval_bottom_up,
                          eval_brute, eval_dnc_sigma1, eval_sigma_t,
                          evaluate, split_subformula)
from fomc.errors import (AssignmentError, PreconditionError,
                         UnsupportedFeatureError)
from fomc.generate import (random_sigma1_nnf_sentence, random_sigma_sentence,
                           random_structure)
from fomc.reach import bfs_reach
from fomc.reductions import chain_sentence

from conftest import GRAPH_VOCAB, MIXED_VOCAB, graph_structure, path_structure

X, Y = Var("x"), Var("y")
EXY = Rel("E", (X, Y))


def brute_bits_ok(report, struct):
    cap = report.classification.subformula_count * (ceil_log2(struct.universe_size) + 1)
    return report.peak_accounted_bits <= cap


class TestEvalBrute:
    def test_edge_exists(self):
        struct = path_structure(3)
        phi = Exists("x", Exists("y", EXY))
        assert eval_brute(phi, struct).answer

    def test_identity_tautology(self):
        phi = Forall("x", Eq(X, X))
        for n in (1, 2, 5):
            assert eval_brute(phi, path_structure(n)).answer

    def test_chain_beyond_distance(self):
        # distance from 0 to 3 on the path is 3, so a bound of 2 fails
        struct = path_structure(4, source=0, target=3)
        assert not bfs_reach_from_struct(struct, 2)
        assert not eval_brute(chain_sentence(2), struct).answer
        assert eval_brute(chain_sentence(3), struct).answer

    def test_missing_assignment(self):
        with pytest.raises(AssignmentError):
            eval_brute(EXY, path_structure(2), Assignment((("x", 0),)))

    def test_accounted_bits_cap(self, rng):
        for _ in range(60):
            phi = random_sigma_sentence(
                rng, MIXED_VOCAB, level=rng.choice([0, 1, 2]), max_vars=2,
                target_norm=rng.randint(4, 30))
            struct = random_structure(rng, MIXED_VOCAB, rng.randint(1, 5), rng.random())
            report = eval_brute(phi, struct)
            assert brute_bits_ok(report, struct)


def bfs_reach_from_struct(struct, k):
    from fomc.digraph import Digraph
    graph = Digraph(struct.universe_size, frozenset(struct.relations["E"]))
    (source,) = [s for (s,) in struct.relations["S"]]
    (target,) = [t for (t,) in struct.relations["T"]]
    return bfs_reach(graph, source, target, k)


class TestEvalBottomUp:
    def test_table_for_open_formula(self):
        vocab = Vocabulary(relations=(("S", 1),))
        struct = Structure(vocab, 3, {"S": frozenset({(0,)})}, {}, {})
        report = eval_bottom_up(Rel("S", (X,)), struct)
        assert report.table == ((0,),)
        closed = eval_bottom_up(Exists("x", Rel("S", (X,))), struct)
        assert closed.answer and closed.table is None

    def test_function_symbols_rejected(self):
        from fomc.core import Apply
        vocab = Vocabulary(relations=(("R", 1),), functions=(("f", 1),))
        struct = Structure(vocab, 2, {"R": frozenset()}, {},
                           {"f": {(0,): 0, (1,): 1}})
        phi = Exists("x", Rel("R", (Apply("f", (X,)),)))
        with pytest.raises(UnsupportedFeatureError, match="eliminate_functions"):
            eval_bottom_up(phi, struct)

    def test_agreement_with_brute(self, rng):
        for _ in range(200):
            phi = random_sigma_sentence(
                rng, MIXED_VOCAB, level=rng.choice([0, 1, 2, 3]), max_vars=3,
                target_norm=rng.randint(4, 40), rank_budget=4)
            struct = random_structure(rng, MIXED_VOCAB, rng.randint(1, 5), rng.random())
            assert (eval_bottom_up(phi, struct).answer
                    == eval_brute(phi, struct).answer)

    def test_enumeration_cap_on_chain(self, rng):
        struct = random_structure(rng, GRAPH_VOCAB, 6, 0.3)
        phi = chain_sentence(8)
        report = eval_bottom_up(phi, struct)
        assert report.assignments_enumerated <= (8 * 8 + 4) * 6 ** 2 == 2448

    def test_universal_quantifier(self):
        struct = graph_structure(2, {(0, 0), (0, 1), (1, 0), (1, 1)})
        assert eval_bottom_up(Forall("x", Forall("y", EXY)), struct).answer
        struct = graph_structure(2, {(0, 1)})
        assert not eval_bottom_up(Forall("x", Exists("y", EXY)), struct).answer


class TestSplitSubformula:
    def test_right_heavy_conjunction(self):
        a, b, c = Rel("S", (X,)), Rel("T", (X,)), Rel("S", (Y,))
        phi = And(a, And(b, c))
        path = split_subformula(phi)
        assert path == (1,)
        assert subformula_at(phi, path) == And(b, c)

    def test_chain_window(self):
        phi = chain_sentence(4)
        total = subformula_count(phi)
        assert total == 36
        part = subformula_count(subformula_at(phi, split_subformula(phi)))
        assert 12 <= part <= 24

    def test_too_small_rejected(self):
        with pytest.raises(PreconditionError):
            split_subformula(Not(Rel("S", (X,))))
        with pytest.raises(PreconditionError):
            split_subformula(Rel("S", (X,)))

    def test_window_on_random_formulas(self, rng):
        for _ in range(300):
            phi = random_sigma_sentence(
                rng, MIXED_VOCAB, level=rng.choice([0, 1, 2]), max_vars=3,
                target_norm=rng.randint(3, 60), tolerance=0.6)
            total = subformula_count(phi)
            if total < 3:
                continue
            part = subformula_count(subformula_at(phi, split_subformula(phi)))
            assert 3 * part >= total
            assert part <= -(-2 * total // 3)


class TestBuildGuarded:
    def test_quantified_variable_gets_guard(self):
        phi = Exists("y", And(EXY, Rel("T", (Y,))))
        path = (0, 1)
        assert subformula_at(phi, path) == Rel("T", (Y,))
        g = build_guarded(phi, path)
        assert g.yvars == ("y",) and g.guard_kinds == ("bound",)
        c = g.fresh_constants[0]
        expected = Exists("y", And(Eq(Y, Const(c)), And(EXY, Rel("T", (Y,)))))
        assert g.phi1 == expected
        assert subformula_at(g.phi1, g.phi0_path) == g.phi0

    def test_globally_free_variable_unguarded(self):
        big = And(Rel("S", (X,)), And(Rel("S", (X,)), Rel("S", (X,))))
        phi = And(EXY, big)
        path = (1,)
        g = build_guarded(phi, path)
        assert g.guard_kinds == ("free",)
        assert g.phi1 == phi

    def test_growth_is_twice_bound_count(self, rng):
        for _ in range(200):
            phi = nnf(random_sigma1_nnf_sentence(
                rng, GRAPH_VOCAB, max_vars=2, target_norm=rng.randint(6, 40)))
            if subformula_count(phi) < 3:
                continue
            g = build_guarded(phi, split_subformula(phi))
            bound = sum(1 for kind in g.guard_kinds if kind == "bound")
            assert (subformula_count(g.phi1)
                    == subformula_count(phi) + 2 * bound)
            assert len(g.yvars) <= width(phi)

    def test_rejects_non_nnf(self):
        phi = Not(Exists("x", And(Rel("S", (X,)), And(Rel("S", (X,)), Rel("S", (X,))))))
        with pytest.raises(PreconditionError):
            build_guarded(phi, (0,))


class TestDncSigma1:
    def test_chain_one_step(self):
        struct = graph_structure(2, {(0, 1)}, source=0, target=1)
        phi = nnf(chain_sentence(1))
        report = eval_dnc_sigma1(phi, 2, struct)
        assert report.answer

    def test_agreement_with_brute(self, rng):
        for _ in range(300):
            phi = random_sigma1_nnf_sentence(
                rng, GRAPH_VOCAB, max_vars=3, target_norm=rng.randint(4, 60))
            struct = random_structure(rng, GRAPH_VOCAB, rng.randint(2, 5), rng.random())
            w = width(phi)
            report = eval_dnc_sigma1(phi, w, struct)
            assert report.answer == eval_brute(phi, struct).answer
            assert report.peak_depth <= dnc_depth_cap(subformula_count(phi))
            assert report.peak_accounted_bits <= dnc_bits_cap(
                report.peak_depth, w, struct.universe_size)

    def test_depth_cap_on_chain(self):
        struct = graph_structure(2, {(0, 1)}, source=0, target=1)
        for k in (1, 4, 9, 17, 33):
            phi = nnf(chain_sentence(k))
            report = eval_dnc_sigma1(phi, 2, struct)
            assert report.peak_depth <= dnc_depth_cap(subformula_count(phi))

    def test_deterministic_trace(self, rng):
        for _ in range(20):
            phi = random_sigma1_nnf_sentence(
                rng, GRAPH_VOCAB, max_vars=2, target_norm=40)
            struct = random_structure(rng, GRAPH_VOCAB, 3, rng.random())
            first = eval_dnc_sigma1(phi, width(phi), struct)
            second = eval_dnc_sigma1(phi, width(phi), struct)
            assert first.trace == second.trace
            assert first.answer == second.answer

    def test_faithful_mode_matches_direct(self, rng):
        for _ in range(40):
            phi = random_sigma1_nnf_sentence(
                rng, GRAPH_VOCAB, max_vars=2, target_norm=rng.randint(20, 55))
            struct = random_structure(rng, GRAPH_VOCAB, rng.randint(2, 4), rng.random())
            direct = eval_dnc_sigma1(phi, width(phi), struct)
            faithful = eval_dnc_sigma1(phi, width(phi), struct, mode="faithful")
            assert direct.answer == faithful.answer
            assert direct.trace == faithful.trace

    def test_open_formula_with_assignment(self):
        struct = path_structure(3)
        phi = Exists("y", EXY)
        assert eval_dnc_sigma1(phi, 2, struct, Assignment((("x", 0),))).answer
        assert not eval_dnc_sigma1(phi, 2, struct, Assignment((("x", 2),))).answer

    def test_width_bound_enforced(self):
        phi = nnf(chain_sentence(2))
        with pytest.raises(PreconditionError):
            eval_dnc_sigma1(phi, 1, path_structure(2))

    def test_universal_rejected(self):
        with pytest.raises(PreconditionError):
            eval_dnc_sigma1(Forall("x", Eq(X, X)), 1, path_structure(2))


class TestSigmaT:
    def test_dominating_vertex(self):
        struct = graph_structure(3, {(1, 0), (1, 1), (1, 2)})
        phi = Exists("x", Forall("y", EXY))
        assert eval_sigma_t(phi, struct).answer

    def test_two_cycle_without_loops(self):
        struct = graph_structure(2, {(0, 1), (1, 0)})
        phi = Exists("x", Forall("y", EXY))
        assert not eval_sigma_t(phi, struct).answer

    def test_agreement_with_brute(self, rng):
        for _ in range(200):
            t = rng.choice([1, 1, 2, 2, 3])
            phi = random_sigma_sentence(
                rng, GRAPH_VOCAB, level=t, max_vars=3,
                target_norm=rng.randint(5, 45), rank_budget=4)
            struct = random_structure(rng, GRAPH_VOCAB, rng.randint(2, 4), rng.random())
            assert (eval_sigma_t(phi, struct).answer
                    == eval_brute(phi, struct).answer)

    def test_universal_sentence_rejected(self):
        with pytest.raises(PreconditionError):
            eval_sigma_t(Forall("x", Eq(X, X)), path_structure(2))

    def test_open_formula_rejected(self):
        with pytest.raises(PreconditionError):
            eval_sigma_t(Rel("S", (X,)), path_structure(2))


class TestEvaluate:
    def test_auto_prefers_alternation_path(self):
        vocab = Vocabulary(relations=(("S", 1),))
        struct = Structure(vocab, 3, {"S": frozenset({(0,)})}, {}, {})
        report = evaluate(Exists("x", Rel("S", (X,))), struct, "auto")
        assert report.engine == "dnc" and report.answer

    def test_dnc_engine_rejects_universal(self):
        with pytest.raises(PreconditionError):
            evaluate(Forall("x", Eq(X, X)), path_structure(2), "dnc")

    def test_auto_falls_back_to_bottom_up(self):
        report = evaluate(Forall("x", Eq(X, X)), path_structure(3), "auto")
        assert report.engine == "bottomup" and report.answer

    def test_auto_uses_brute_for_functions(self):
        from fomc.core import Apply
        vocab = Vocabulary(relations=(("R", 1),), functions=(("f", 1),))
        struct = Structure(vocab, 2, {"R": frozenset({(1,)})}, {},
                           {"f": {(0,): 1, (1,): 1}})
        phi = Forall("x", Rel("R", (Apply("f", (X,)),)))
        report = evaluate(phi, struct, "auto")
        assert report.engine == "brute" and report.answer

    def test_engines_agree_on_seed_zero_suite(self):
        rng = random.Random(0)
        for _ in range(60):
            phi = random_sigma_sentence(
                rng, GRAPH_VOCAB, level=rng.choice([1, 2]), max_vars=2,
                target_norm=rng.randint(4, 30))
            struct = random_structure(rng, GRAPH_VOCAB, rng.randint(2, 4), rng.random())
            answers = {evaluate(phi, struct, engine).answer
                       for engine in ("brute", "bottomup", "dnc", "auto")}
            assert len(answers) == 1


class TestSpaceMeter:
    def test_peak_tracks_current(self):
        meter = SpaceMeter("dnc")
        meter.push(5)
        meter.push(3, level=False)
        assert meter.peak_accounted_bits == 8
        assert meter.peak_depth == 1
        meter.pop(3, level=False)
        meter.pop(5)
        assert meter.current_accounted_bits == 0
        assert meter.current_depth == 0
        assert meter.peak_accounted_bits == 8

    def test_freshly_charged_leaf_counts_into_shared_meter(self):
        struct = path_structure(2, source=0, target=1)
        phi = nnf(chain_sentence(1))
        meter = SpaceMeter("dnc")
        eval_dnc_sigma1(phi, 2, struct, meter=meter)
        assert meter.peak_accounted_bits > 0
        assert meter.current_accounted_bits == 0
