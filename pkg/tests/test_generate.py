import random

import pytest

from fomc.core import classify, free_vars, num_variables, subformula_count
from fomc.errors import PreconditionError
from fomc.generate import (chain_instance, random_digraph,
                           random_sigma1_nnf_sentence, random_sigma_sentence,
                           random_structure)
from fomc.core import is_nnf

from conftest import FUNC_VOCAB, GRAPH_VOCAB, MIXED_VOCAB


class TestDeterminism:
    def test_structures_reproduce(self):
        a = random_structure(random.Random(42), FUNC_VOCAB, 4, 0.5)
        b = random_structure(random.Random(42), FUNC_VOCAB, 4, 0.5)
        assert a == b

    def test_formulas_reproduce(self):
        kwargs = dict(level=2, max_vars=2, target_norm=25)
        a = random_sigma_sentence(random.Random(7), GRAPH_VOCAB, **kwargs)
        b = random_sigma_sentence(random.Random(7), GRAPH_VOCAB, **kwargs)
        assert a == b

    def test_digraphs_reproduce(self):
        assert (random_digraph(random.Random(3), 9, 0.4)
                == random_digraph(random.Random(3), 9, 0.4))


class TestFormulaShape:
    def test_exact_level(self, rng):
        for level in (0, 1, 2, 3):
            vocab = MIXED_VOCAB if level == 0 else GRAPH_VOCAB
            for _ in range(25):
                phi = random_sigma_sentence(rng, vocab, level=level,
                                            max_vars=3,
                                            target_norm=rng.randint(4, 40))
                assert classify(phi).sigma_level == level
                assert not free_vars(phi)

    def test_norm_within_tolerance(self, rng):
        for _ in range(50):
            target = rng.randint(10, 60)
            phi = random_sigma_sentence(rng, GRAPH_VOCAB, level=2,
                                        max_vars=2, target_norm=target)
            assert abs(subformula_count(phi) - target) <= 0.2 * target + 1

    def test_variable_budget(self, rng):
        for budget in (1, 2, 3):
            phi = random_sigma_sentence(rng, GRAPH_VOCAB, level=1,
                                        max_vars=budget, target_norm=20)
            assert num_variables(phi) <= budget

    def test_nnf_variant(self, rng):
        for _ in range(30):
            phi = random_sigma1_nnf_sentence(rng, GRAPH_VOCAB, max_vars=2,
                                             target_norm=rng.randint(5, 40))
            assert is_nnf(phi)
            assert classify(phi).sigma_level == 1

    def test_level_zero_needs_constants(self, rng):
        with pytest.raises(PreconditionError):
            random_sigma_sentence(rng, GRAPH_VOCAB, level=0, max_vars=2,
                                  target_norm=10)


class TestChainInstance:
    def test_marker_shapes(self, rng):
        struct, phi = chain_instance(rng, 3, 5)
        assert struct.universe_size == 5
        assert len(struct.relations["S"]) == 1
        assert len(struct.relations["T"]) == 1
        assert subformula_count(phi) == 8 * 3 + 4
