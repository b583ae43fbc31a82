"""Evaluation engines with a shared accounted-space meter.

Three strategies are provided: a recursive brute-force evaluator, a
bottom-up table evaluator for bounded-variable formulas, and a
divide-and-conquer evaluator for existential formulas that is lifted to
bounded alternation level.  Accounted bits are a cost model charged per
engine, not process memory.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (And, Apply, Assignment, Atom, Classification, Const, Eq,
                   Exists, Forall, Formula, Not, Or, Path, Rel, Structure,
                   Var, alternation_levels, children, classify, free_vars,
                   is_nnf, is_quantifier_free, nnf, occurrences, replace_at,
                   subformula_at, subformula_count, uses_function_symbols,
                   width)
from .errors import (AssignmentError, ModelCheckError, PreconditionError,
                     UnsupportedFeatureError)

DNC_MARGIN = 24


def ceil_log2(n: int) -> int:
    """Smallest b with 2**b >= n, for n >= 1."""
    return (n - 1).bit_length()


def ceil_log_four_thirds(n: int) -> int:
    """Smallest d with (4/3)**d >= n, computed exactly."""
    d = 0
    pow4, scaled = 1, n
    while pow4 < scaled:
        d += 1
        pow4 *= 4
        scaled *= 3
    return d


# ---------------------------------------------------------------------------
# Meter and report
# ---------------------------------------------------------------------------


@dataclass
class SpaceMeter:
    """Accounted-space charge tracker for one evaluation.

    ``cost_model`` names the engine whose charging discipline applies;
    the depth counters track divide-and-conquer levels under the "dnc"
    model and recursion frames under "brute".  Never share a meter
    between concurrent evaluations.
    """

    cost_model: str = "brute"
    current_depth: int = 0
    peak_depth: int = 0
    current_accounted_bits: int = 0
    peak_accounted_bits: int = 0

    def push(self, bits: int, level: bool = True) -> None:
        self.current_accounted_bits += bits
        if level:
            self.current_depth += 1
        self.peak_accounted_bits = max(self.peak_accounted_bits, self.current_accounted_bits)
        self.peak_depth = max(self.peak_depth, self.current_depth)

    def pop(self, bits: int, level: bool = True) -> None:
        self.current_accounted_bits -= bits
        if level:
            self.current_depth -= 1


@dataclass
class EvalReport:
    """Answer plus accounted-space and counter telemetry for one run."""

    answer: bool
    engine: str
    classification: Classification
    peak_depth: int
    peak_accounted_bits: int
    recursive_calls: int
    assignments_enumerated: int
    wall_ms: float = 0.0
    table: Optional[tuple[tuple[int, ...], ...]] = None
    trace: Optional[tuple] = None


def _check_alpha(phi: Formula, alpha: Optional[Assignment]) -> Assignment:
    alpha = alpha if alpha is not None else Assignment()
    fv = free_vars(phi)
    have = set(alpha.variables)
    missing = [v for v in fv if v not in have]
    if missing:
        raise AssignmentError(
            f"assignment does not cover free variable(s) {', '.join(missing)}")
    return alpha


# ---------------------------------------------------------------------------
# Recursive brute force
# ---------------------------------------------------------------------------


def eval_brute(phi: Formula, struct: Structure, alpha: Optional[Assignment] = None,
               meter: Optional[SpaceMeter] = None) -> EvalReport:
    """Direct recursion on the syntax, looping a quantified variable over
    the whole universe and combining answer bits upward.

    Function terms are evaluated bottom-up through their tables.  Each open
    connective or quantifier frame is charged ``ceil(log2 |A|) + 1``
    accounted bits.
    """
    alpha = _check_alpha(phi, alpha)
    meter = meter if meter is not None else SpaceMeter("brute")
    track_depth = meter.cost_model == "brute"
    n = struct.universe_size
    frame_bits = ceil_log2(n) + 1
    binding = alpha.mapping
    calls = 0
    enumerated = 0
    start = time.perf_counter()

    rels = struct.relations
    consts = struct.constants
    funs = struct.functions

    def term_value(term) -> int:
        if isinstance(term, Var):
            return binding[term.name]
        if isinstance(term, Const):
            return consts[term.name]
        return funs[term.func][tuple(term_value(a) for a in term.args)]

    def run(node: Formula) -> bool:
        nonlocal calls, enumerated
        calls += 1
        if isinstance(node, Eq):
            return term_value(node.left) == term_value(node.right)
        if isinstance(node, Rel):
            return tuple(term_value(a) for a in node.args) in rels[node.name]
        meter.push(frame_bits, level=track_depth)
        try:
            if isinstance(node, Not):
                return not run(node.sub)
            if isinstance(node, And):
                return run(node.left) and run(node.right)
            if isinstance(node, Or):
                return run(node.left) or run(node.right)
            var = node.var
            saved = binding.get(var, _MISSING)
            try:
                if isinstance(node, Exists):
                    for value in range(n):
                        enumerated += 1
                        binding[var] = value
                        if run(node.body):
                            return True
                    return False
                for value in range(n):
                    enumerated += 1
                    binding[var] = value
                    if not run(node.body):
                        return False
                return True
            finally:
                if saved is _MISSING:
                    binding.pop(var, None)
                else:
                    binding[var] = saved
        finally:
            meter.pop(frame_bits, level=track_depth)

    answer = run(phi)
    return EvalReport(
        answer=answer,
        engine="brute",
        classification=classify(phi),
        peak_depth=meter.peak_depth,
        peak_accounted_bits=meter.peak_accounted_bits,
        recursive_calls=calls,
        assignments_enumerated=enumerated,
        wall_ms=(time.perf_counter() - start) * 1000.0,
    )


class _Missing:
    pass


_MISSING = _Missing()


# ---------------------------------------------------------------------------
# Bottom-up table evaluation
# ---------------------------------------------------------------------------


def eval_bottom_up(phi: Formula, struct: Structure) -> EvalReport:
    """Satisfying-assignment tables computed upward over the syntax tree.

    Each subformula occurrence gets the set of assignments (tuples over its
    free variables in first-appearance order) that satisfy it.  Requires a
    relational vocabulary with constants; reroute formulas with function
    symbols through function elimination first.
    """
    if uses_function_symbols(phi):
        raise UnsupportedFeatureError(
            "bottom-up evaluation does not support function symbols; "
            "apply eliminate_functions first")
    n = struct.universe_size
    calls = 0
    enumerated = 0
    start = time.perf_counter()

    from .core import eval_atom

    def table(node: Formula) -> tuple[tuple[str, ...], set[tuple[int, ...]]]:
        nonlocal calls, enumerated
        calls += 1
        fv = free_vars(node)
        if isinstance(node, Atom):
            rows = set()
            for combo in itertools.product(range(n), repeat=len(fv)):
                enumerated += 1
                if eval_atom(node, struct, dict(zip(fv, combo))):
                    rows.add(combo)
            return fv, rows
        if isinstance(node, Not):
            _, sub = table(node.sub)
            rows = set()
            for combo in itertools.product(range(n), repeat=len(fv)):
                enumerated += 1
                if combo not in sub:
                    rows.add(combo)
            return fv, rows
        if isinstance(node, (And, Or)):
            lfv, left = table(node.left)
            rfv, right = table(node.right)
            lpos = [fv.index(v) for v in lfv]
            rpos = [fv.index(v) for v in rfv]
            conj = isinstance(node, And)
            rows = set()
            for combo in itertools.product(range(n), repeat=len(fv)):
                enumerated += 1
                inl = tuple(combo[i] for i in lpos) in left
                inr = tuple(combo[i] for i in rpos) in right
                if (inl and inr) if conj else (inl or inr):
                    rows.add(combo)
            return fv, rows
        # quantifiers
        bfv, body = table(node.body)
        var = node.var
        if var not in bfv:
            enumerated += len(body)
            return fv, set(body)
        keep = [i for i, v in enumerate(bfv) if v != var]
        vidx = bfv.index(var)
        if isinstance(node, Exists):
            rows = set()
            for row in body:
                enumerated += 1
                rows.add(tuple(row[i] for i in keep))
            projected = rows
        else:
            counts: dict[tuple[int, ...], set[int]] = {}
            for row in body:
                enumerated += 1
                counts.setdefault(tuple(row[i] for i in keep), set()).add(row[vidx])
            projected = {key for key, vals in counts.items() if len(vals) == n}
        # realign the projected order to the parent's first-appearance order
        pfv = tuple(bfv[i] for i in keep)
        if pfv == fv:
            return fv, projected
        pos = [pfv.index(v) for v in fv]
        return fv, {tuple(row[i] for i in pos) for row in projected}

    fv, rows = table(phi)
    if fv:
        answer = bool(rows)
        table_out = tuple(sorted(rows))
    else:
        answer = () in rows
        table_out = None
    return EvalReport(
        answer=answer,
        engine="bottomup",
        classification=classify(phi),
        peak_depth=0,
        peak_accounted_bits=0,
        recursive_calls=calls,
        assignments_enumerated=enumerated,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        table=table_out,
    )


# ---------------------------------------------------------------------------
# Balanced splitting and the guarded rewrite
# ---------------------------------------------------------------------------


def split_subformula(phi: Formula) -> Path:
    """Position of a balanced split point.

    Walks from the root into the child with the largest node count
    (leftmost on ties) while the current count exceeds ``ceil(2N/3)``;
    the stopping node has count within [N/3, ceil(2N/3)].
    """
    total = subformula_count(phi)
    if total < 3:
        raise PreconditionError(f"cannot split a formula with {total} node(s)")
    upper = -(-2 * total // 3)
    path: Path = ()
    node = phi
    count = total
    while count > upper:
        kids = children(node)
        counts = [subformula_count(c) for c in kids]
        best = max(range(len(kids)), key=lambda i: (counts[i], -i))
        path = path + (best,)
        node = kids[best]
        count = counts[best]
    return path


@dataclass(frozen=True)
class GuardedRewrite:
    """Result of pinning the split subformula's free variables.

    ``phi1`` is the input with each quantified variable of the split
    subformula guarded by an equality with a fresh constant; variables
    free in the whole formula get no guard and are marked "free".
    """

    phi0: Formula
    phi1: Formula
    phi0_path: Path
    yvars: tuple[str, ...]
    guard_kinds: tuple[str, ...]
    fresh_constants: tuple[str, ...]
    level: int


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "x"
    return name


def build_guarded(phi: Formula, path: Path, level: int = 1,
                  taken: Optional[set[str]] = None) -> GuardedRewrite:
    """Insert equality guards for the bound free variables of the split.

    For each variable free in the split subformula whose binder lies on the
    root path, the innermost such binder body is wrapped with ``v=c`` for a
    fresh constant ``c``.  Constant names embed the recursion level so that
    expansions accumulated across levels never collide.
    """
    sigma, _ = alternation_levels(phi)
    if not is_nnf(phi) or sigma is None or sigma > 1:
        raise PreconditionError(
            "guarded rewrite needs an existential formula in negation normal form")
    taken = set(taken) if taken else set()
    phi0 = subformula_at(phi, path)
    yvars = free_vars(phi0)

    # Innermost binder position on the root path, per variable.
    binder: dict[str, Path] = {}
    node = phi
    for depth, step in enumerate(path):
        if isinstance(node, Exists) and node.var in yvars:
            binder[node.var] = path[:depth]
        node = children(node)[step]

    kinds = tuple("bound" if v in binder else "free" for v in yvars)
    count = max(1, len(yvars))
    consts = []
    for i in range(1, count + 1):
        name = _fresh_name(f"c{level}_{i}", taken)
        taken.add(name)
        consts.append(name)

    guarded_prefixes = set()
    phi1 = phi
    for i, v in enumerate(yvars):
        prefix = binder.get(v)
        if prefix is None:
            continue
        guarded_prefixes.add(prefix)
        target = subformula_at(phi1, prefix)
        guard = Eq(Var(v), Const(consts[i]))
        phi1 = replace_at(phi1, prefix, Exists(v, And(guard, target.body)))

    new_path: list[int] = []
    for depth, step in enumerate(path):
        new_path.append(step)
        if path[:depth] in guarded_prefixes:
            new_path.append(1)

    return GuardedRewrite(
        phi0=phi0,
        phi1=phi1,
        phi0_path=tuple(new_path),
        yvars=yvars,
        guard_kinds=kinds,
        fresh_constants=tuple(consts),
        level=level,
    )


# ---------------------------------------------------------------------------
# Divide-and-conquer evaluation for existential formulas
# ---------------------------------------------------------------------------


@dataclass
class PossibilityTrace:
    """Live stack of per-level loop tuples and recursion possibilities.

    Entry ``(p, b)`` records the branch taken at that level: ``p == 0``
    descends into the split subformula; ``p == 1`` or ``2`` descends into
    the rewritten remainder after the split held or failed at ``b``.
    """

    entries: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def push(self, possibility: int, b: tuple[int, ...]) -> None:
        self.entries.append((possibility, b))

    def pop(self) -> None:
        self.entries.pop()

    def depth(self) -> int:
        return len(self.entries)


class _DncRun:
    """One divide-and-conquer evaluation, in direct or faithful mode.

    Direct mode passes the current formula, structure, and assignment down
    the recursion.  Faithful mode carries only the possibility trace and
    recomputes that state from the root inputs at every level, exercising
    the same bookkeeping that makes the recursion replayable.
    """

    def __init__(self, phi: Formula, w: int, struct: Structure,
                 alpha: Assignment, meter: SpaceMeter, mode: str):
        self.root_phi = phi
        self.root_struct = struct
        self.root_alpha = alpha
        self.w = w
        self.meter = meter
        self.mode = mode
        self.threshold = DNC_MARGIN * w + DNC_MARGIN
        self.level_bits = w * ceil_log2(struct.universe_size) + 2
        self.trace = PossibilityTrace()
        self.history: list[tuple[int, int, tuple[int, ...]]] = []
        self.calls = 0
        self.enumerated = 0

    def run(self) -> bool:
        return self._recurse(self.root_phi, self.root_struct, self.root_alpha)

    def _replay(self) -> tuple[Formula, Structure, Assignment]:
        phi = self.root_phi
        alpha = self.root_alpha
        taken = set(self.root_struct.vocabulary.symbol_names())
        consts: dict[str, int] = {}
        for level, (possibility, b) in enumerate(self.trace.entries, start=1):
            if subformula_count(phi) < self.threshold:
                continue
            g = build_guarded(phi, split_subformula(phi), level=level, taken=taken)
            if possibility == 0:
                phi = g.phi0
                alpha = Assignment(tuple(zip(g.yvars, b)))
            else:
                truth: Formula = Eq(Const(g.fresh_constants[0]), Const(g.fresh_constants[0]))
                if possibility == 2:
                    truth = Not(truth)
                phi = replace_at(g.phi1, g.phi0_path, truth)
                new_consts = dict(zip(g.fresh_constants, b if b else (0,)))
                consts.update(new_consts)
                taken.update(new_consts)
                alpha = Assignment.for_formula(phi, alpha.mapping)
        struct = self.root_struct.expanded(constants=consts) if consts else self.root_struct
        return phi, struct, alpha

    def _recurse(self, phi: Formula, struct: Structure, alpha: Assignment) -> bool:
        self.calls += 1
        self.meter.push(self.level_bits, level=True)
        try:
            if self.mode == "faithful":
                phi, struct, alpha = self._replay()
            if subformula_count(phi) < self.threshold:
                report = eval_brute(phi, struct, alpha, meter=self.meter)
                self.calls += report.recursive_calls
                self.enumerated += report.assignments_enumerated
                return report.answer
            depth = self.trace.depth() + 1
            taken = set(struct.vocabulary.symbol_names())
            g = build_guarded(phi, split_subformula(phi), level=depth, taken=taken)
            n = struct.universe_size
            amap = alpha.mapping
            pinned = [amap[v] if kind == "free" else None
                      for v, kind in zip(g.yvars, g.guard_kinds)]
            loop_positions = [i for i, value in enumerate(pinned) if value is None]
            for combo in itertools.product(range(n), repeat=len(loop_positions)):
                b = list(pinned)
                for pos, value in zip(loop_positions, combo):
                    b[pos] = value
                b = tuple(b)
                self.enumerated += 1

                alpha0 = Assignment(tuple(zip(g.yvars, b)))
                self.trace.push(0, b)
                self.history.append((depth, 0, b))
                try:
                    held = self._recurse(g.phi0, struct, alpha0)
                finally:
                    self.trace.pop()

                possibility = 1 if held else 2
                truth: Formula = Eq(Const(g.fresh_constants[0]), Const(g.fresh_constants[0]))
                if not held:
                    truth = Not(truth)
                rest = replace_at(g.phi1, g.phi0_path, truth)
                expansion = dict(zip(g.fresh_constants, b if b else (0,)))
                struct_b = struct.expanded(constants=expansion)
                alpha1 = Assignment.for_formula(rest, amap)
                self.trace.push(possibility, b)
                self.history.append((depth, possibility, b))
                try:
                    if self._recurse(rest, struct_b, alpha1):
                        return True
                finally:
                    self.trace.pop()
            return False
        finally:
            self.meter.pop(self.level_bits, level=True)


def dnc_depth_cap(norm: int) -> int:
    return ceil_log_four_thirds(norm) + 1


def dnc_bits_cap(peak_depth: int, w: int, universe: int) -> int:
    log_n = ceil_log2(universe)
    return peak_depth * (w * log_n + 2) + DNC_MARGIN * (w + 1) * (log_n + 1)


def eval_dnc_sigma1(phi: Formula, w: int, struct: Structure,
                    alpha: Optional[Assignment] = None,
                    meter: Optional[SpaceMeter] = None,
                    mode: str = "direct") -> EvalReport:
    """Divide-and-conquer evaluation of an existential formula.

    Splits the syntax tree at a balanced point, loops assignments to the
    split's quantified free variables while pinning the globally free ones,
    and recurses on the split and on the guarded remainder with the split
    replaced by its truth value.  Below ``24*(w+1)`` nodes it falls back to
    the brute-force evaluator on the shared meter.

    Every recursion level is charged ``w*ceil(log2 |A|) + 2`` accounted
    bits: the loop tuple plus a two-bit possibility tag.
    """
    if mode not in ("direct", "faithful"):
        raise PreconditionError(f"unknown mode {mode!r}")
    sigma, _ = alternation_levels(phi)
    if not is_nnf(phi) or sigma is None or sigma > 1:
        raise PreconditionError(
            "divide-and-conquer evaluation needs an existential formula "
            "in negation normal form")
    if w < width(phi):
        raise PreconditionError(f"width bound {w} is below the formula width {width(phi)}")
    alpha = _check_alpha(phi, alpha)
    if tuple(alpha.variables) != free_vars(phi):
        alpha = Assignment.for_formula(phi, alpha.mapping)
    own_meter = meter is None
    meter = meter if meter is not None else SpaceMeter("dnc")
    start = time.perf_counter()

    run = _DncRun(phi, w, struct, alpha, meter, mode)
    answer = run.run()

    norm = subformula_count(phi)
    if own_meter:
        if meter.peak_depth > dnc_depth_cap(norm):
            raise ModelCheckError(
                f"internal accounting violation: depth {meter.peak_depth} "
                f"exceeds cap {dnc_depth_cap(norm)}")
        cap = dnc_bits_cap(meter.peak_depth, w, struct.universe_size)
        if meter.peak_accounted_bits > cap:
            raise ModelCheckError(
                f"internal accounting violation: {meter.peak_accounted_bits} "
                f"accounted bits exceed cap {cap}")
    return EvalReport(
        answer=answer,
        engine="dnc",
        classification=classify(phi),
        peak_depth=meter.peak_depth,
        peak_accounted_bits=meter.peak_accounted_bits,
        recursive_calls=run.calls,
        assignments_enumerated=run.enumerated,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        trace=tuple(run.history),
    )


# ---------------------------------------------------------------------------
# Bounded alternation level
# ---------------------------------------------------------------------------


def _skeleton_leaves(phi: Formula) -> list[tuple[Path, Formula]]:
    """Maximal non-quantifier-free subformulas below the positive
    existential skeleton (descending through And/Or/Exists only)."""
    leaves: list[tuple[Path, Formula]] = []

    def walk(node: Formula, path: Path) -> None:
        if isinstance(node, Exists):
            walk(node.body, path + (0,))
        elif isinstance(node, (And, Or)):
            walk(node.left, path + (0,))
            walk(node.right, path + (1,))
        elif not is_quantifier_free(node):
            leaves.append((path, node))

    walk(phi, ())
    return leaves


def eval_sigma_t(phi: Formula, struct: Structure,
                 meter: Optional[SpaceMeter] = None,
                 mode: str = "direct") -> EvalReport:
    """Evaluate a sentence of bounded existential alternation level.

    Level at most one goes straight to the divide-and-conquer evaluator
    after negation normalization.  At higher levels the maximal
    universally-rooted subformulas are tabulated into fresh relations over
    the same universe (each decided by recursing on its negation, one
    level down), the sentence is rewritten over those relations into an
    existential formula no larger than the input, and that formula is
    evaluated by divide and conquer.
    """
    if free_vars(phi):
        raise PreconditionError("alternation-level evaluation needs a sentence")
    cls = classify(phi)
    if cls.sigma_level is None:
        raise PreconditionError(
            "formula has no existential alternation level; "
            "it cannot be dispatched to the divide-and-conquer evaluator")
    start = time.perf_counter()
    counters = {"calls": 0, "enumerated": 0}

    def close_with_constants(node: Formula, values: dict[str, int],
                             base: Structure, tag: str) -> tuple[Formula, Structure]:
        taken = set(base.vocabulary.symbol_names())
        mapping = {}
        closed = node
        for i, (var, value) in enumerate(values.items(), start=1):
            name = _fresh_name(f"{tag}_{i}", taken)
            taken.add(name)
            mapping[name] = value
            from .core import substitute_const
            closed = substitute_const(closed, var, name)
        return closed, base.expanded(constants=mapping)

    def solve(psi: Formula, base: Structure, top_meter: Optional[SpaceMeter]) -> tuple[bool, EvalReport]:
        level = alternation_levels(psi)[0]
        if level is None or level <= 1:
            report = eval_dnc_sigma1(psi, width(psi), base, meter=top_meter, mode=mode)
            counters["calls"] += report.recursive_calls
            counters["enumerated"] += report.assignments_enumerated
            return report.answer, report
        n = base.universe_size
        taken = set(base.vocabulary.symbol_names())
        new_rels: dict[str, tuple[int, set]] = {}
        new_consts: dict[str, int] = {}
        star = psi
        for j, (path, leaf) in enumerate(_skeleton_leaves(psi), start=1):
            xs = free_vars(leaf)
            if xs:
                rel_name = _fresh_name(f"q{j}", taken)
                taken.add(rel_name)
                rows = set()
                for combo in itertools.product(range(n), repeat=len(xs)):
                    closed, closed_struct = close_with_constants(
                        leaf, dict(zip(xs, combo)), base, f"q{j}v")
                    negated, _ = solve(nnf(Not(closed)), closed_struct, None)
                    if not negated:
                        rows.add(combo)
                new_rels[rel_name] = (len(xs), rows)
                star = replace_at(star, path, Rel(rel_name, tuple(Var(v) for v in xs)))
            else:
                negated, _ = solve(nnf(Not(leaf)), base, None)
                holds = not negated
                const_name = _fresh_name(f"q{j}c", taken)
                taken.add(const_name)
                new_consts[const_name] = 0
                truth: Formula = Eq(Const(const_name), Const(const_name))
                star = replace_at(star, path, truth if holds else Not(truth))
        star_struct = base.expanded(constants=new_consts, relations=new_rels)
        report = eval_dnc_sigma1(star, width(psi), star_struct, meter=top_meter, mode=mode)
        counters["calls"] += report.recursive_calls
        counters["enumerated"] += report.assignments_enumerated
        return report.answer, report

    answer, top_report = solve(nnf(phi), struct, meter)
    return EvalReport(
        answer=answer,
        engine="dnc",
        classification=cls,
        peak_depth=top_report.peak_depth,
        peak_accounted_bits=top_report.peak_accounted_bits,
        recursive_calls=counters["calls"],
        assignments_enumerated=counters["enumerated"],
        wall_ms=(time.perf_counter() - start) * 1000.0,
        trace=top_report.trace,
    )


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

ENGINES = ("brute", "bottomup", "dnc", "auto")


def evaluate(phi: Formula, struct: Structure, engine: str = "auto",
             mode: str = "direct") -> EvalReport:
    """Evaluate a sentence with the selected engine.

    ``auto`` picks the divide-and-conquer path when the sentence has an
    existential alternation level, otherwise bottom-up evaluation when it
    is function-free, otherwise brute force.
    """
    if engine not in ENGINES:
        raise PreconditionError(f"unknown engine {engine!r}")
    if free_vars(phi):
        raise PreconditionError("evaluation needs a sentence; bind or assign free variables")
    start = time.perf_counter()
    if engine == "brute":
        report = eval_brute(phi, struct)
    elif engine == "bottomup":
        report = eval_bottom_up(phi, struct)
    elif engine == "dnc":
        report = eval_sigma_t(phi, struct, mode=mode)
    else:
        if classify(phi).sigma_level is not None:
            report = eval_sigma_t(phi, struct, mode=mode)
        elif not uses_function_symbols(phi):
            report = eval_bottom_up(nnf(phi), struct)
        else:
            report = eval_brute(phi, struct)
    report.wall_ms = (time.perf_counter() - start) * 1000.0
    return report
