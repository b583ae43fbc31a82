"""Vocabularies, terms, formulas, finite structures, and assignments.

Everything here is immutable after construction and safe to share across
threads; all operations are pure functions on these values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

from .errors import AssignmentError, PreconditionError, StructureError, VocabularyError

# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vocabulary:
    """Relation, constant, and function symbols with their arities.

    Relation and function arities must be positive; nullary "functions" are
    modeled as constants, which form their own kind.
    """

    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(n), int(a)) for n, a in self.relations))
        object.__setattr__(self, "constants", tuple(str(n) for n in self.constants))
        object.__setattr__(self, "functions", tuple((str(n), int(a)) for n, a in self.functions))
        seen = set()
        for name in self.symbol_names():
            if name in seen:
                raise VocabularyError(f"duplicate symbol {name!r}")
            seen.add(name)
        for name, arity in itertools.chain(self.relations, self.functions):
            if arity < 1:
                raise VocabularyError(f"symbol {name!r} must have positive arity, got {arity}")

    def symbol_names(self) -> Iterator[str]:
        for name, _ in self.relations:
            yield name
        yield from self.constants
        for name, _ in self.functions:
            yield name

    @property
    def relation_arities(self) -> dict[str, int]:
        return dict(self.relations)

    @property
    def function_arities(self) -> dict[str, int]:
        return dict(self.functions)

    def relation_arity(self, name: str) -> int:
        try:
            return self.relation_arities[name]
        except KeyError:
            raise VocabularyError(f"unknown relation symbol {name!r}") from None

    def function_arity(self, name: str) -> int:
        try:
            return self.function_arities[name]
        except KeyError:
            raise VocabularyError(f"unknown function symbol {name!r}") from None

    def has_constant(self, name: str) -> bool:
        return name in self.constants

    def has_symbol(self, name: str) -> bool:
        return name in set(self.symbol_names())

    def extended(self, relations=(), constants=(), functions=()) -> "Vocabulary":
        """A copy with extra symbols appended in the given order."""
        return Vocabulary(
            self.relations + tuple(relations),
            self.constants + tuple(constants),
            self.functions + tuple(functions),
        )


# ---------------------------------------------------------------------------
# Terms and formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Apply:
    func: str
    args: tuple["Term", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Term = Union[Var, Const, Apply]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Eq, Rel, Not, And, Or, Exists, Forall]

Atom = (Eq, Rel)
_BINARY = (And, Or)
_QUANT = (Exists, Forall)


def is_atom(phi: Formula) -> bool:
    return isinstance(phi, Atom)


def children(phi: Formula) -> tuple[Formula, ...]:
    if isinstance(phi, Atom):
        return ()
    if isinstance(phi, Not):
        return (phi.sub,)
    if isinstance(phi, _BINARY):
        return (phi.left, phi.right)
    return (phi.body,)


def with_children(phi: Formula, new: tuple[Formula, ...]) -> Formula:
    if isinstance(phi, Not):
        return Not(new[0])
    if isinstance(phi, And):
        return And(new[0], new[1])
    if isinstance(phi, Or):
        return Or(new[0], new[1])
    if isinstance(phi, Exists):
        return Exists(phi.var, new[0])
    if isinstance(phi, Forall):
        return Forall(phi.var, new[0])
    raise TypeError(f"{type(phi).__name__} has no children")


# Positions in a syntax tree are tuples of child indices from the root.
Path = tuple[int, ...]


def subformula_at(phi: Formula, path: Path) -> Formula:
    node = phi
    for i in path:
        node = children(node)[i]
    return node


def replace_at(phi: Formula, path: Path, replacement: Formula) -> Formula:
    if not path:
        return replacement
    kids = list(children(phi))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], replacement)
    return with_children(phi, tuple(kids))


def occurrences(phi: Formula) -> Iterator[tuple[Path, Formula]]:
    """All subformula occurrences, in preorder with their positions."""
    stack = [((), phi)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for i, child in reversed(list(enumerate(children(node)))):
            stack.append((path + (i,), child))


# ---------------------------------------------------------------------------
# Syntactic measures
# ---------------------------------------------------------------------------


def subformula_count(phi: Formula) -> int:
    """Number of syntax-tree nodes, counting repeated subformulas separately."""
    if isinstance(phi, Atom):
        return 1
    return 1 + sum(subformula_count(c) for c in children(phi))


def atom_count(phi: Formula) -> int:
    if isinstance(phi, Atom):
        return 1
    return sum(atom_count(c) for c in children(phi))


def term_vars(term: Term, out: list[str], bound: frozenset[str]) -> None:
    if isinstance(term, Var):
        if term.name not in bound and term.name not in out:
            out.append(term.name)
    elif isinstance(term, Apply):
        for arg in term.args:
            term_vars(arg, out, bound)


def free_vars(phi: Formula) -> tuple[str, ...]:
    """Free variables in order of first appearance, scanning left to right."""
    out: list[str] = []

    def walk(node: Formula, bound: frozenset[str]) -> None:
        if isinstance(node, Eq):
            term_vars(node.left, out, bound)
            term_vars(node.right, out, bound)
        elif isinstance(node, Rel):
            for arg in node.args:
                term_vars(arg, out, bound)
        elif isinstance(node, _QUANT):
            walk(node.body, bound | {node.var})
        else:
            for child in children(node):
                walk(child, bound)

    walk(phi, frozenset())
    return tuple(out)


def all_variables(phi: Formula) -> frozenset[str]:
    """Every variable name occurring in the formula, free or bound."""
    names: set[str] = set()

    def scan_term(term: Term) -> None:
        if isinstance(term, Var):
            names.add(term.name)
        elif isinstance(term, Apply):
            for arg in term.args:
                scan_term(arg)

    def walk(node: Formula) -> None:
        if isinstance(node, Eq):
            scan_term(node.left)
            scan_term(node.right)
        elif isinstance(node, Rel):
            for arg in node.args:
                scan_term(arg)
        else:
            if isinstance(node, _QUANT):
                names.add(node.var)
            for child in children(node):
                walk(child)

    walk(phi)
    return frozenset(names)


def num_variables(phi: Formula) -> int:
    return len(all_variables(phi))


def width(phi: Formula) -> int:
    """Largest number of free variables over all subformula occurrences."""

    def walk(node: Formula) -> tuple[frozenset[str], int]:
        if isinstance(node, Atom):
            fv = frozenset(free_vars(node))
            return fv, len(fv)
        if isinstance(node, _QUANT):
            fv, w = walk(node.body)
            fv = fv - {node.var}
            return fv, max(w, len(fv))
        if isinstance(node, Not):
            fv, w = walk(node.sub)
            return fv, max(w, len(fv))
        lf, lw = walk(node.left)
        rf, rw = walk(node.right)
        fv = lf | rf
        return fv, max(lw, rw, len(fv))

    return walk(phi)[1]


def quantifier_rank(phi: Formula) -> int:
    """Depth of quantifier nesting (not the number of quantifiers)."""
    if isinstance(phi, Atom):
        return 0
    bump = 1 if isinstance(phi, _QUANT) else 0
    return bump + max(quantifier_rank(c) for c in children(phi))


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, _QUANT):
        return False
    return all(is_quantifier_free(c) for c in children(phi))


def uses_function_symbols(phi: Formula) -> bool:
    def term_has(term: Term) -> bool:
        return isinstance(term, Apply)

    for _, node in occurrences(phi):
        if isinstance(node, Eq):
            if term_has(node.left) or term_has(node.right):
                return True
        elif isinstance(node, Rel):
            if any(term_has(a) for a in node.args):
                return True
    return False


def _min_opt(*values: Optional[int]) -> Optional[int]:
    present = [v for v in values if v is not None]
    return min(present) if present else None


def alternation_levels(phi: Formula) -> tuple[Optional[int], Optional[int]]:
    """Least existential and universal alternation levels of a formula.

    Quantifier-free formulas sit at level (0, 0).  A quantified formula
    belongs to the existential side when it can be built from lower
    universal-side formulas by positive boolean combinations and existential
    quantification, and dually for the universal side.  Negation of a
    non-quantifier-free formula swaps the two sides.  ``None`` means the
    formula has no level on that side.
    """
    if is_quantifier_free(phi):
        return 0, 0
    if isinstance(phi, Not):
        s, p = alternation_levels(phi.sub)
        return p, s
    if isinstance(phi, _BINARY):
        ls, lp = alternation_levels(phi.left)
        rs, rp = alternation_levels(phi.right)
        les = _min_opt(ls, None if lp is None else lp + 1)
        res = _min_opt(rs, None if rp is None else rp + 1)
        lep = _min_opt(lp, None if ls is None else ls + 1)
        rep = _min_opt(rp, None if rs is None else rs + 1)
        sig = None if les is None or res is None else max(les, res)
        pi = None if lep is None or rep is None else max(lep, rep)
        return sig, pi
    if isinstance(phi, Exists):
        s, p = alternation_levels(phi.body)
        eff = _min_opt(s, None if p is None else p + 1)
        return (None if eff is None else max(eff, 1)), None
    # Forall
    s, p = alternation_levels(phi.body)
    eff = _min_opt(p, None if s is None else s + 1)
    return None, (None if eff is None else max(eff, 1))


@dataclass(frozen=True)
class Classification:
    """Syntactic metrics of a formula used for dispatch and reporting."""

    num_variables: int
    width: int
    subformula_count: int
    encoding_length: int
    sigma_level: Optional[int]
    pi_level: Optional[int]


def classify(phi: Formula) -> Classification:
    sigma, pi = alternation_levels(phi)
    return Classification(
        num_variables=num_variables(phi),
        width=width(phi),
        subformula_count=subformula_count(phi),
        encoding_length=len(format_formula(phi)),
        sigma_level=sigma,
        pi_level=pi,
    )


# ---------------------------------------------------------------------------
# Rewrites
# ---------------------------------------------------------------------------


def nnf(phi: Formula) -> Formula:
    """Equivalent formula with negation applied to atoms only."""

    def pos(node: Formula) -> Formula:
        if isinstance(node, Atom):
            return node
        if isinstance(node, Not):
            return neg(node.sub)
        if isinstance(node, And):
            return And(pos(node.left), pos(node.right))
        if isinstance(node, Or):
            return Or(pos(node.left), pos(node.right))
        if isinstance(node, Exists):
            return Exists(node.var, pos(node.body))
        return Forall(node.var, pos(node.body))

    def neg(node: Formula) -> Formula:
        if isinstance(node, Atom):
            return Not(node)
        if isinstance(node, Not):
            return pos(node.sub)
        if isinstance(node, And):
            return Or(neg(node.left), neg(node.right))
        if isinstance(node, Or):
            return And(neg(node.left), neg(node.right))
        if isinstance(node, Exists):
            return Forall(node.var, neg(node.body))
        return Exists(node.var, neg(node.body))

    return pos(phi)


def is_nnf(phi: Formula) -> bool:
    for _, node in occurrences(phi):
        if isinstance(node, Not) and not isinstance(node.sub, Atom):
            return False
    return True


def substitute_const(phi: Formula, var: str, const: str, vocab: Optional[Vocabulary] = None) -> Formula:
    """Replace every free occurrence of ``var`` by the constant ``const``."""
    if vocab is not None and not vocab.has_constant(const):
        raise VocabularyError(f"unknown constant symbol {const!r}")

    def sub_term(term: Term) -> Term:
        if isinstance(term, Var):
            return Const(const) if term.name == var else term
        if isinstance(term, Apply):
            return Apply(term.func, tuple(sub_term(a) for a in term.args))
        return term

    def walk(node: Formula) -> Formula:
        if isinstance(node, Eq):
            return Eq(sub_term(node.left), sub_term(node.right))
        if isinstance(node, Rel):
            return Rel(node.name, tuple(sub_term(a) for a in node.args))
        if isinstance(node, _QUANT) and node.var == var:
            return node
        return with_children(node, tuple(walk(c) for c in children(node)))

    return walk(phi)


# ---------------------------------------------------------------------------
# Canonical text rendering (reparsed by the textio module)
# ---------------------------------------------------------------------------


def format_term(term: Term) -> str:
    if isinstance(term, Var) or isinstance(term, Const):
        return term.name
    return f"{term.func}({','.join(format_term(a) for a in term.args)})"


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"{format_term(phi.left)}={format_term(phi.right)}"
    if isinstance(phi, Rel):
        return f"{phi.name}({','.join(format_term(a) for a in phi.args)})"
    if isinstance(phi, Not):
        return f"~{format_formula(phi.sub)}"
    if isinstance(phi, And):
        return f"({format_formula(phi.left)} & {format_formula(phi.right)})"
    if isinstance(phi, Or):
        return f"({format_formula(phi.left)} | {format_formula(phi.right)})"
    if isinstance(phi, Exists):
        return f"EX {phi.var}. {format_formula(phi.body)}"
    return f"ALL {phi.var}. {format_formula(phi.body)}"


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Structure:
    """A finite universe {0..n-1} with interpretations for every symbol.

    Relation interpretations are sets of tuples, constants single elements,
    and function interpretations total tables keyed by argument tuples.
    """

    vocabulary: Vocabulary
    universe_size: int
    relations: Mapping[str, frozenset[tuple[int, ...]]]
    constants: Mapping[str, int]
    functions: Mapping[str, Mapping[tuple[int, ...], int]]

    def __post_init__(self):
        n = self.universe_size
        if n < 1:
            raise StructureError("universe must be nonempty")
        rels = {name: frozenset(tuple(int(x) for x in t) for t in tuples)
                for name, tuples in self.relations.items()}
        consts = {name: int(v) for name, v in self.constants.items()}
        funcs = {name: {tuple(int(x) for x in args): int(v) for args, v in table.items()}
                 for name, table in self.functions.items()}
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)
        object.__setattr__(self, "functions", funcs)

        declared_rels = self.vocabulary.relation_arities
        if set(rels) != set(declared_rels):
            raise StructureError("relation interpretations do not match the vocabulary")
        for name, tuples in rels.items():
            arity = declared_rels[name]
            for t in tuples:
                if len(t) != arity:
                    raise StructureError(f"tuple {t} has wrong arity for relation {name!r}")
                if any(not 0 <= x < n for x in t):
                    raise StructureError(f"tuple {t} of relation {name!r} is out of range")
        if set(consts) != set(self.vocabulary.constants):
            raise StructureError("constant interpretations do not match the vocabulary")
        for name, value in consts.items():
            if not 0 <= value < n:
                raise StructureError(f"constant {name!r} is out of range")
        declared_funs = self.vocabulary.function_arities
        if set(funcs) != set(declared_funs):
            raise StructureError("function interpretations do not match the vocabulary")
        for name, table in funcs.items():
            arity = declared_funs[name]
            expected = n ** arity
            if len(table) != expected:
                raise StructureError(f"function {name!r} table is not total")
            for args, value in table.items():
                if len(args) != arity or any(not 0 <= x < n for x in args):
                    raise StructureError(f"function {name!r} row {args} is out of range")
                if not 0 <= value < n:
                    raise StructureError(f"function {name!r} value {value} is out of range")

    def expanded(self, constants: Mapping[str, int] = None,
                 relations: Mapping[str, tuple[int, frozenset]] = None) -> "Structure":
        """Expansion by fresh constant and relation symbols.

        ``relations`` maps each new name to an ``(arity, tuples)`` pair.
        """
        constants = dict(constants or {})
        relations = dict(relations or {})
        vocab = self.vocabulary.extended(
            relations=[(name, arity) for name, (arity, _) in relations.items()],
            constants=list(constants),
        )
        rels = dict(self.relations)
        for name, (_, tuples) in relations.items():
            rels[name] = frozenset(tuples)
        consts = dict(self.constants)
        consts.update(constants)
        return Structure(vocab, self.universe_size, rels, consts, self.functions)


def structure_size(struct: Structure) -> int:
    """Symbol count plus universe plus relation cells plus function rows.

    Each constant contributes one unit, matching an arity-zero table.
    """
    vocab = struct.vocabulary
    total = len(vocab.relations) + len(vocab.constants) + len(vocab.functions)
    total += struct.universe_size
    for name, arity in vocab.relations:
        total += len(struct.relations[name]) * arity
    total += len(vocab.constants)
    for _, arity in vocab.functions:
        total += struct.universe_size ** arity
    return total


# ---------------------------------------------------------------------------
# Assignments and atom evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    """Ordered partial map from variables to universe elements.

    The order is the first-appearance order of the variables in whatever
    formula the assignment targets.
    """

    items: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple((str(v), int(e)) for v, e in self.items))
        names = [v for v, _ in self.items]
        if len(names) != len(set(names)):
            raise AssignmentError("assignment binds a variable twice")

    @staticmethod
    def for_formula(phi: Formula, values: Mapping[str, int]) -> "Assignment":
        """Assignment over ``free_vars(phi)`` in first-appearance order."""
        fv = free_vars(phi)
        missing = [v for v in fv if v not in values]
        if missing:
            raise AssignmentError(f"missing assignment for variable(s) {', '.join(missing)}")
        return Assignment(tuple((v, values[v]) for v in fv))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.items)

    @property
    def mapping(self) -> dict[str, int]:
        return dict(self.items)

    def get(self, var: str) -> int:
        for v, e in self.items:
            if v == var:
                return e
        raise AssignmentError(f"variable {var!r} is unassigned")

    def restricted(self, variables) -> "Assignment":
        m = self.mapping
        return Assignment(tuple((v, m[v]) for v in variables))


def eval_term(term: Term, struct: Structure, binding: Mapping[str, int]) -> int:
    """Value of a term under a variable binding, via the function tables."""
    if isinstance(term, Var):
        try:
            return binding[term.name]
        except KeyError:
            raise AssignmentError(f"variable {term.name!r} is unassigned") from None
    if isinstance(term, Const):
        try:
            return struct.constants[term.name]
        except KeyError:
            raise VocabularyError(f"unknown constant symbol {term.name!r}") from None
    table = struct.functions.get(term.func)
    if table is None:
        raise VocabularyError(f"unknown function symbol {term.func!r}")
    args = tuple(eval_term(a, struct, binding) for a in term.args)
    return table[args]


def eval_atom(atom: Formula, struct: Structure, alpha) -> bool:
    """Truth of an equality or relation atom under an assignment."""
    binding = alpha.mapping if isinstance(alpha, Assignment) else dict(alpha)
    if isinstance(atom, Eq):
        return eval_term(atom.left, struct, binding) == eval_term(atom.right, struct, binding)
    if isinstance(atom, Rel):
        tuples = struct.relations.get(atom.name)
        if tuples is None:
            raise VocabularyError(f"unknown relation symbol {atom.name!r}")
        values = tuple(eval_term(a, struct, binding) for a in atom.args)
        return values in tuples
    raise PreconditionError(f"not an atom: {type(atom).__name__}")


def validate_formula(phi: Formula, vocab: Vocabulary) -> None:
    """Check every symbol use against the vocabulary, raising on mismatch."""

    def check_term(term: Term) -> None:
        if isinstance(term, Const):
            if not vocab.has_constant(term.name):
                raise VocabularyError(f"unknown constant symbol {term.name!r}")
        elif isinstance(term, Apply):
            arity = vocab.function_arity(term.func)
            if len(term.args) != arity:
                raise VocabularyError(
                    f"function {term.func!r} expects {arity} argument(s), got {len(term.args)}")
            for arg in term.args:
                check_term(arg)

    for _, node in occurrences(phi):
        if isinstance(node, Eq):
            check_term(node.left)
            check_term(node.right)
        elif isinstance(node, Rel):
            arity = vocab.relation_arity(node.name)
            if len(node.args) != arity:
                raise VocabularyError(
                    f"relation {node.name!r} expects {arity} argument(s), got {len(node.args)}")
            for arg in node.args:
                check_term(arg)
