"""Seeded random generators for structures, digraphs, and formulas.

Formula generation works top-down from the alternation grammar, so the
classified level of the output is exact by construction (and re-checked).
"""
from __future__ import annotations

import itertools
import random
from typing import Optional

from .core import (And, Apply, Const, Eq, Exists, Forall, Formula, Not, Or,
                   Rel, Structure, Var, Vocabulary, alternation_levels,
                   classify, nnf, num_variables, subformula_count)
from .digraph import Digraph
from .errors import ModelCheckError, PreconditionError
from .reductions import CHAIN_VOCABULARY, chain_sentence

VAR_POOL = ("x", "y", "z", "u", "v", "w")


def random_digraph(rng: random.Random, n: int, density: float) -> Digraph:
    edges = frozenset((u, v) for u in range(n) for v in range(n)
                      if rng.random() < density)
    return Digraph(n, edges)


def random_structure(rng: random.Random, vocab: Vocabulary, n: int,
                     density: float = 0.3) -> Structure:
    if n < 1:
        raise PreconditionError("universe must be nonempty")
    relations = {}
    for name, arity in vocab.relations:
        rows = {t for t in itertools.product(range(n), repeat=arity)
                if rng.random() < density}
        relations[name] = frozenset(rows)
    constants = {name: rng.randrange(n) for name in vocab.constants}
    functions = {}
    for name, arity in vocab.functions:
        functions[name] = {args: rng.randrange(n)
                           for args in itertools.product(range(n), repeat=arity)}
    return Structure(vocab, n, relations, constants, functions)


def chain_instance(rng: random.Random, k: int, n: int,
                   density: float = 0.4) -> tuple[Structure, Formula]:
    """A random digraph with source/target markers plus the matching
    bounded-path sentence."""
    graph = random_digraph(rng, n, density)
    source = rng.randrange(n)
    target = rng.randrange(n)
    struct = Structure(
        CHAIN_VOCABULARY, n,
        {"E": frozenset(graph.edges),
         "S": frozenset({(source,)}),
         "T": frozenset({(target,)})},
        {}, {})
    return struct, chain_sentence(k)


class _FormulaGen:
    def __init__(self, rng: random.Random, vocab: Vocabulary, pool,
                 allow_functions: bool, max_term_depth: int = 2):
        self.rng = rng
        self.vocab = vocab
        self.pool = tuple(pool)
        self.allow_functions = allow_functions and bool(vocab.functions)
        self.max_term_depth = max_term_depth

    def term(self, scope, depth: int = 0):
        rng = self.rng
        choices = []
        if scope:
            choices.append("var")
        if self.vocab.constants:
            choices.append("const")
        if self.allow_functions and depth < self.max_term_depth:
            choices.append("fun")
        if not choices:
            raise ModelCheckError("cannot build a term: no variables or constants in scope")
        kind = rng.choice(choices)
        if kind == "var":
            return Var(rng.choice(scope))
        if kind == "const":
            return Const(rng.choice(self.vocab.constants))
        name, arity = rng.choice(self.vocab.functions)
        return Apply(name, tuple(self.term(scope, depth + 1) for _ in range(arity)))

    def atom(self, scope) -> Formula:
        rng = self.rng
        if self.vocab.relations and (rng.random() < 0.8 or (not scope and not self.vocab.constants)):
            name, arity = rng.choice(self.vocab.relations)
            return Rel(name, tuple(self.term(scope) for _ in range(arity)))
        return Eq(self.term(scope), self.term(scope))

    def qf(self, quota: int, scope) -> Formula:
        """Random quantifier-free formula with roughly ``quota`` nodes."""
        rng = self.rng
        if quota >= 3 and rng.random() < 0.6:
            left_quota = rng.randint(1, quota - 2)
            left = self.qf(left_quota, scope)
            right = self.qf(quota - 1 - left_quota, scope)
            op = And if rng.random() < 0.5 else Or
            return op(left, right)
        if quota >= 2 and rng.random() < 0.3:
            return Not(self.qf(quota - 1, scope))
        return self.atom(scope)

    def block(self, sigma_side: bool, level: int, quota: int, scope,
              rank_left: int) -> Formula:
        """Exact-level alternation block: a quantifier of the given side
        over a lower dual block, with optional positive padding."""
        rng = self.rng
        if level == 0:
            return self.qf(quota, scope)
        var = rng.choice(self.pool)
        inner_scope = scope if var in scope else scope + (var,)
        body_quota = max(1, quota - 1)
        core = self.block(not sigma_side, level - 1,
                          max(1, body_quota - rng.randint(0, 4)),
                          inner_scope, rank_left - 1)
        room = body_quota - subformula_count(core) - 1
        if room >= 2 and rng.random() < 0.6:
            pad = self.qf(min(room, rng.randint(1, 6)), inner_scope)
            core = And(core, pad) if rng.random() < 0.5 else Or(pad, core)
        quant = Exists if sigma_side else Forall
        node = quant(var, core)
        extra = rank_left - level
        while extra > 0 and rng.random() < 0.3:
            node = quant(rng.choice(self.pool), node)
            extra -= 1
        room = quota - subformula_count(node) - 1
        if scope and room >= 2 and rng.random() < 0.4:
            pad = self.qf(min(room, rng.randint(1, 6)), scope)
            node = And(node, pad) if rng.random() < 0.5 else Or(pad, node)
        return node


def random_sigma_sentence(rng: random.Random, vocab: Vocabulary, *,
                          level: int, max_vars: int, target_norm: int,
                          rank_budget: Optional[int] = None,
                          tolerance: float = 0.2,
                          allow_functions: bool = False,
                          max_term_depth: int = 2) -> Formula:
    """Random sentence with exact existential alternation level.

    The node count lands within ``tolerance`` of ``target_norm`` and the
    number of distinct variables stays at most ``max_vars``.
    """
    if level < 0:
        raise PreconditionError("alternation level must be nonnegative")
    if level >= 1 and max_vars < 1:
        raise PreconditionError("quantified sentences need at least one variable")
    if level == 0 and not vocab.constants:
        raise PreconditionError("quantifier-free sentences need constant symbols")
    rank_budget = rank_budget if rank_budget is not None else max(level, 4)
    if rank_budget < level:
        raise PreconditionError("rank budget below the alternation level")
    pool = VAR_POOL[:max_vars]
    low = max(1, int(target_norm * (1 - tolerance)))
    high = int(-(-target_norm * (1 + tolerance) // 1))
    quota = target_norm
    for attempt in range(60):
        gen = _FormulaGen(random.Random(rng.randrange(2 ** 30)), vocab, pool,
                          allow_functions, max_term_depth)
        if level == 0:
            phi = gen.qf(quota, ())
        else:
            phi = gen.block(True, level, quota, (), rank_budget)
        norm = subformula_count(phi)
        cls_level = alternation_levels(phi)[0]
        if cls_level == level and low <= norm <= high and num_variables(phi) <= max_vars:
            return phi
        if norm < low:
            quota = quota + max(2, (low - norm))
        elif norm > high:
            quota = max(1, quota - max(2, (norm - high) // 2))
    raise ModelCheckError(
        f"could not hit node-count target {target_norm} at level {level}")


def random_sigma1_nnf_sentence(rng: random.Random, vocab: Vocabulary, *,
                               max_vars: int, target_norm: int,
                               rank_budget: Optional[int] = None) -> Formula:
    """Existential sentence in negation normal form, for the
    divide-and-conquer and reduction suites."""
    phi = random_sigma_sentence(rng, vocab, level=1, max_vars=max_vars,
                                target_norm=target_norm, rank_budget=rank_budget,
                                tolerance=0.35)
    phi = nnf(phi)
    if alternation_levels(phi)[0] != 1:
        # negation pushing can only keep or lower the level; retry on lower
        return random_sigma1_nnf_sentence(rng, vocab, max_vars=max_vars,
                                          target_norm=target_norm,
                                          rank_budget=rank_budget)
    return phi
