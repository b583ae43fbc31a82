import itertools
import random

import pytest
from hypothesis import strategies as st

from fomc.core import (And, Const, Eq, Exists, Forall, Not, Or, Rel,
                       Structure, Var, Vocabulary)

GRAPH_VOCAB = Vocabulary(relations=(("E", 2), ("S", 1), ("T", 1)))
MIXED_VOCAB = Vocabulary(relations=(("E", 2), ("S", 1)), constants=("c",))
FUNC_VOCAB = Vocabulary(relations=(("R", 1), ("E", 2)), constants=("c",),
                        functions=(("f", 1), ("g", 2)))


def graph_structure(n, edges, source=None, target=None):
    """Structure over E/S/T with optional endpoint markers."""
    return Structure(
        GRAPH_VOCAB, n,
        {"E": frozenset(edges),
         "S": frozenset({(source,)} if source is not None else set()),
         "T": frozenset({(target,)} if target is not None else set())},
        {}, {})


def path_structure(n, source=None, target=None):
    return graph_structure(n, {(i, i + 1) for i in range(n - 1)}, source, target)


def all_structures(vocab, n):
    """Exhaustive enumeration of structures over small relational vocabularies."""
    rel_domains = []
    for name, arity in vocab.relations:
        cells = list(itertools.product(range(n), repeat=arity))
        rel_domains.append((name, cells))
    const_names = vocab.constants
    for rel_choice in itertools.product(
            *[_powerset(cells) for _, cells in rel_domains]):
        rels = {name: frozenset(ch)
                for (name, _), ch in zip(rel_domains, rel_choice)}
        for const_choice in itertools.product(range(n), repeat=len(const_names)):
            yield Structure(vocab, n, rels, dict(zip(const_names, const_choice)), {})


def _powerset(cells):
    for mask in range(2 ** len(cells)):
        yield [cells[i] for i in range(len(cells)) if mask >> i & 1]


# Hypothesis strategy for formulas over the graph vocabulary with a small
# variable pool.  Shapes are unrestricted (negations anywhere), which is
# what the rewrite properties need.

_VARS = ("x", "y", "z")


def _atoms():
    terms = st.sampled_from([Var(v) for v in _VARS])
    rel = st.one_of(
        st.builds(lambda a, b: Rel("E", (a, b)), terms, terms),
        st.builds(lambda a: Rel("S", (a,)), terms),
        st.builds(lambda a: Rel("T", (a,)), terms),
    )
    eq = st.builds(Eq, terms, terms)
    return st.one_of(rel, eq)


def formulas(max_leaves=8):
    return st.recursive(
        _atoms(),
        lambda kids: st.one_of(
            st.builds(Not, kids),
            st.builds(And, kids, kids),
            st.builds(Or, kids, kids),
            st.builds(Exists, st.sampled_from(_VARS), kids),
            st.builds(Forall, st.sampled_from(_VARS), kids),
        ),
        max_leaves=max_leaves,
    )


@pytest.fixture
def rng():
    return random.Random(0)
