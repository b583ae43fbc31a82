"""Constructive translations between model checking and reachability, and
elimination of function symbols by extending the structure with tuples."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import (And, Apply, Assignment, Const, Eq, Exists, Forall,
                   Formula, Not, Or, Path, Rel, Structure, Term, Var,
                   Vocabulary, all_variables, alternation_levels, classify,
                   eval_atom, free_vars, is_nnf, occurrences, subformula_count,
                   uses_function_symbols)
from .digraph import Digraph
from .errors import PreconditionError, StructureError

# ---------------------------------------------------------------------------
# Bounded reachability instances and the two-variable path family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StconInstance:
    """A bounded source-to-target reachability question."""

    graph: Digraph
    source: int
    target: int
    bound: int

    def __post_init__(self):
        self.graph.check_vertex(self.source)
        self.graph.check_vertex(self.target)
        if self.bound < 0:
            raise PreconditionError("path-length bound must be nonnegative")


CHAIN_VOCABULARY = Vocabulary(relations=(("E", 2), ("S", 1), ("T", 1)))


def chain_formula(k: int) -> Formula:
    """Open formula over x expressing "some target vertex is reachable from
    x in at most k steps", written with the two reusable variables x, y."""
    if k < 0:
        raise PreconditionError("chain index must be nonnegative")
    phi: Formula = Rel("T", (Var("x"),))
    for _ in range(k):
        step = Exists("x", And(Eq(Var("x"), Var("y")), phi))
        hop = Or(Eq(Var("y"), Var("x")), Rel("E", (Var("x"), Var("y"))))
        phi = Exists("y", And(hop, step))
    return phi


def chain_sentence(k: int) -> Formula:
    return Exists("x", And(Rel("S", (Var("x"),)), chain_formula(k)))


def stcon_to_mc(inst: StconInstance) -> tuple[Structure, Formula]:
    """Encode bounded reachability as a two-variable existential sentence
    over the graph with the endpoints marked by unary relations."""
    g = inst.graph
    struct = Structure(
        CHAIN_VOCABULARY,
        g.num_vertices,
        {
            "E": frozenset(g.edges),
            "S": frozenset({(inst.source,)}),
            "T": frozenset({(inst.target,)}),
        },
        {},
        {},
    )
    return struct, chain_sentence(inst.bound)


# ---------------------------------------------------------------------------
# Model checking to reachability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfigVertex:
    """A vertex of the evaluation graph: a subformula occurrence, an
    assignment covering exactly its free variables, and a phase bit."""

    path: Path
    assignment: Assignment
    bit: int


def mc_to_stcon_detailed(struct: Structure, phi: Formula) -> tuple[StconInstance, tuple[ConfigVertex, ...]]:
    """Build the evaluation digraph whose source-to-target paths witness
    truth of an existential sentence in negation normal form.

    Vertices pair each subformula occurrence with an assignment of its free
    variables and a bit; bit 0 means "to be checked" and bit 1 "verified".
    Edges step into subformulas and back out once verified; a verified
    conjunction chains its conjuncts.  A path of length at most twice the
    node count exists from the unchecked root to the verified root iff the
    sentence holds.
    """
    sigma, _ = alternation_levels(phi)
    if not is_nnf(phi) or sigma is None or sigma > 1:
        raise PreconditionError(
            "reduction needs an existential formula in negation normal form")
    if uses_function_symbols(phi):
        raise PreconditionError(
            "reduction needs a relational vocabulary with constants; "
            "apply eliminate_functions first")
    n = struct.universe_size
    occ = list(occurrences(phi))
    fv_of = {path: free_vars(node) for path, node in occ}

    vertices: list[ConfigVertex] = []
    index: dict[tuple[Path, tuple[int, ...], int], int] = {}
    for path, _ in occ:
        fv = fv_of[path]
        for combo in itertools.product(range(n), repeat=len(fv)):
            for bit in (0, 1):
                index[(path, combo, bit)] = len(vertices)
                vertices.append(ConfigVertex(path, Assignment(tuple(zip(fv, combo))), bit))

    edges: set[tuple[int, int]] = set()

    def restriction(combo: tuple[int, ...], fv: tuple[str, ...],
                    child_fv: tuple[str, ...]) -> tuple[int, ...]:
        values = dict(zip(fv, combo))
        return tuple(values[v] for v in child_fv)

    for path, node in occ:
        fv = fv_of[path]
        for combo in itertools.product(range(n), repeat=len(fv)):
            here0 = index[(path, combo, 0)]
            here1 = index[(path, combo, 1)]
            if isinstance(node, (Eq, Rel, Not)):
                atom = node.sub if isinstance(node, Not) else node
                holds = eval_atom(atom, struct, dict(zip(fv, combo)))
                if holds != isinstance(node, Not):
                    edges.add((here0, here1))
            elif isinstance(node, Or):
                for i in (0, 1):
                    child = path + (i,)
                    sub = restriction(combo, fv, fv_of[child])
                    edges.add((here0, index[(child, sub, 0)]))
                    edges.add((index[(child, sub, 1)], here1))
            elif isinstance(node, And):
                left, right = path + (0,), path + (1,)
                lsub = restriction(combo, fv, fv_of[left])
                rsub = restriction(combo, fv, fv_of[right])
                edges.add((here0, index[(left, lsub, 0)]))
                edges.add((index[(left, lsub, 1)], index[(right, rsub, 0)]))
                edges.add((index[(right, rsub, 1)], here1))
            elif isinstance(node, Exists):
                child = path + (0,)
                child_fv = fv_of[child]
                values = dict(zip(fv, combo))
                for a in range(n):
                    values[node.var] = a
                    sub = tuple(values[v] for v in child_fv)
                    edges.add((here0, index[(child, sub, 0)]))
                    edges.add((index[(child, sub, 1)], here1))
            else:
                raise PreconditionError(
                    "reduction does not handle universal quantifiers")

    graph = Digraph(len(vertices), frozenset(edges))
    source = index[((), (), 0)]
    target = index[((), (), 1)]
    bound = 2 * subformula_count(phi)
    return StconInstance(graph, source, target, bound), tuple(vertices)


def mc_to_stcon(struct: Structure, phi: Formula) -> StconInstance:
    return mc_to_stcon_detailed(struct, phi)[0]


# ---------------------------------------------------------------------------
# Function elimination: tuple-extended structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionNames:
    """Symbol names used by the tuple-extended structure, derived
    deterministically from the input vocabulary."""

    universe: str
    constant_markers: dict[str, str]
    relation_markers: dict[str, str]
    function_graphs: dict[str, str]
    extender: str


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "_"
    return name


def extension_names(vocab: Vocabulary) -> ExtensionNames:
    taken = set(vocab.symbol_names())

    def claim(base: str) -> str:
        name = _fresh(base, taken)
        taken.add(name)
        return name

    universe = claim("U")
    const_markers = {c: claim(f"U_{c}") for c in vocab.constants}
    rel_markers = {r: claim(f"U_{r}") for r, _ in vocab.relations}
    fun_graphs = {f: claim(f"F_{f}") for f, _ in vocab.functions}
    extender = claim("Re")
    return ExtensionNames(universe, const_markers, rel_markers, fun_graphs, extender)


def extend_structure(struct: Structure) -> Structure:
    """Add every extendable tuple as a first-class point.

    The new universe holds the original elements plus, for each relation,
    the prefixes of length at least two of its tuples, and for each
    function of arity r all argument tuples of lengths 2..r.  Length-one
    tuples are identified with the elements themselves.  Unary marker
    relations pick out the original universe, each constant's value, and
    each relation's full tuples; a binary relation holds each function's
    graph and a ternary relation extends a tuple point by one element.
    The original relations and constants are retained unchanged.
    """
    n = struct.universe_size
    if n < 2:
        raise PreconditionError("tuple extension needs at least two elements")
    vocab = struct.vocabulary
    names = extension_names(vocab)

    points: set[tuple[int, ...]] = set()
    for rel, arity in vocab.relations:
        for row in struct.relations[rel]:
            for i in range(2, arity + 1):
                points.add(row[:i])
    for fun, arity in vocab.functions:
        for i in range(2, arity + 1):
            points.update(itertools.product(range(n), repeat=i))

    ordered = sorted(points, key=lambda t: (len(t), t))
    point_id = {t: n + i for i, t in enumerate(ordered)}

    def pid(t: tuple[int, ...]) -> int:
        return t[0] if len(t) == 1 else point_id[t]

    new_size = n + len(ordered)

    relations: dict[str, frozenset] = {}
    new_rel_decls: list[tuple[str, int]] = []

    new_rel_decls.append((names.universe, 1))
    relations[names.universe] = frozenset((a,) for a in range(n))
    for c, marker in names.constant_markers.items():
        new_rel_decls.append((marker, 1))
        relations[marker] = frozenset({(struct.constants[c],)})
    for (rel, arity) in vocab.relations:
        marker = names.relation_markers[rel]
        new_rel_decls.append((marker, 1))
        relations[marker] = frozenset((pid(row),) for row in struct.relations[rel])
    for (fun, arity) in vocab.functions:
        graph_rel = names.function_graphs[fun]
        new_rel_decls.append((graph_rel, 2))
        relations[graph_rel] = frozenset(
            (pid(args), value) for args, value in struct.functions[fun].items())
    new_rel_decls.append((names.extender, 3))
    extender_rows = set()
    for t in ordered:
        prefix = t[:-1]
        if len(prefix) == 1 or prefix in points:
            extender_rows.add((pid(prefix), t[-1], pid(t)))
    relations[names.extender] = frozenset(extender_rows)

    # Retain the original relational part so that function-free formulas
    # survive the translation with their atoms untouched.
    for rel, arity in vocab.relations:
        relations[rel] = struct.relations[rel]

    new_vocab = Vocabulary(
        relations=vocab.relations + tuple(new_rel_decls),
        constants=vocab.constants,
        functions=(),
    )
    return Structure(new_vocab, new_size, relations, dict(struct.constants), {})


# ---------------------------------------------------------------------------
# Function elimination: formula translation
# ---------------------------------------------------------------------------


def _is_plain(term: Term) -> bool:
    return isinstance(term, (Var, Const))


def value_exists(term: Term, names: Optional[ExtensionNames] = None,
                 aux: tuple[str, str, str] = ("x", "y", "z")) -> Formula:
    """Formula over the extended vocabulary stating that the first
    auxiliary variable equals the value of the term, built with existential
    quantifiers."""
    names = names if names is not None else _names_for_term(term)
    x, y, z = aux
    if isinstance(term, Var):
        return Eq(Var(x), term)
    if isinstance(term, Const):
        return Rel(names.constant_markers[term.name], (Var(x),))
    inner = Exists(x, And(Eq(Var(x), Var(y)), tuple_formula(term.args, names, aux)))
    return Exists(y, And(inner, Rel(names.function_graphs[term.func], (Var(y), Var(x)))))


def value_forall(term: Term, names: Optional[ExtensionNames] = None,
                 aux: tuple[str, str, str] = ("x", "y", "z")) -> Formula:
    """Universal twin of ``value_exists``."""
    names = names if names is not None else _names_for_term(term)
    x, y, z = aux
    if isinstance(term, Var):
        return Eq(Var(x), term)
    if isinstance(term, Const):
        return Rel(names.constant_markers[term.name], (Var(x),))
    inner = Exists(x, And(Eq(Var(x), Var(y)), tuple_formula(term.args, names, aux)))
    return Forall(y, Or(Not(inner), Rel(names.function_graphs[term.func], (Var(y), Var(x)))))


def tuple_formula(terms, names: Optional[ExtensionNames] = None,
                  aux: tuple[str, str, str] = ("x", "y", "z")) -> Formula:
    """States that the first auxiliary variable is the tuple point holding
    the values of the given terms, chained via the extender relation."""
    terms = tuple(terms)
    if not terms:
        raise PreconditionError("tuple formula needs at least one term")
    if names is None:
        names = _names_for_terms(terms)
    x, y, z = aux
    if len(terms) == 1:
        return value_exists(terms[0], names, aux)
    prefix = tuple_formula(terms[:-1], names, aux)
    last = value_exists(terms[-1], names, aux)
    return Exists(y, Exists(z, And(
        And(
            Rel(names.extender, (Var(y), Var(z), Var(x))),
            Exists(x, And(Eq(Var(x), Var(y)), prefix)),
        ),
        Exists(x, And(Eq(Var(x), Var(z)), last)),
    )))


def _term_symbols(term: Term, consts: set[str], funs: dict[str, int]) -> None:
    if isinstance(term, Const):
        consts.add(term.name)
    elif isinstance(term, Apply):
        funs[term.func] = len(term.args)
        for a in term.args:
            _term_symbols(a, consts, funs)


def _names_for_terms(terms) -> ExtensionNames:
    consts: set[str] = set()
    funs: dict[str, int] = {}
    for t in terms:
        _term_symbols(t, consts, funs)
    vocab = Vocabulary(constants=tuple(sorted(consts)),
                       functions=tuple(sorted(funs.items())))
    return extension_names(vocab)


def _names_for_term(term: Term) -> ExtensionNames:
    return _names_for_terms([term])


def _aux_variables(phi: Formula, vocab: Vocabulary) -> tuple[str, str, str]:
    used = set(all_variables(phi)) | set(vocab.symbol_names())
    out = []
    for base in ("x", "y", "z"):
        name = base
        while name in used:
            name += "_"
        used.add(name)
        out.append(name)
    return tuple(out)


def eliminate_functions(struct: Structure, phi: Formula) -> tuple[Structure, Formula]:
    """Translate a sentence with function symbols into an equivalent one
    over the tuple-extended structure.

    Atoms whose terms are all variables or constants survive unchanged;
    other atoms are rewritten through value and tuple formulas, in an
    existential or universal variant chosen from the alternation level so
    the translation adds only three auxiliary variables.  Quantifiers are
    relativized to the original-universe marker.
    """
    if struct.universe_size < 2:
        raise PreconditionError("function elimination needs at least two elements")
    if free_vars(phi):
        raise PreconditionError("function elimination needs a sentence")
    cls = classify(phi)
    if cls.sigma_level is not None:
        use_exists = cls.sigma_level % 2 == 1
    elif cls.pi_level is not None:
        use_exists = cls.pi_level % 2 == 0
    else:
        raise PreconditionError("sentence has no alternation level")
    names = extension_names(struct.vocabulary)
    aux = _aux_variables(phi, struct.vocabulary)
    x, y, z = aux

    def tr(node: Formula, exists_variant: bool) -> Formula:
        if isinstance(node, Eq):
            if _is_plain(node.left) and _is_plain(node.right):
                return node
            if exists_variant:
                return Exists(x, And(value_exists(node.left, names, aux),
                                     value_exists(node.right, names, aux)))
            return Forall(x, Or(Not(value_exists(node.left, names, aux)),
                                value_forall(node.right, names, aux)))
        if isinstance(node, Rel):
            if all(_is_plain(t) for t in node.args):
                return node
            # Only tuples extendable to a held relation row exist as points,
            # so a universal rewrite would be vacuously true on false atoms;
            # the witness form is sound in both variants.
            marker = names.relation_markers[node.name]
            tup = tuple_formula(node.args, names, aux)
            return Exists(x, And(Rel(marker, (Var(x),)), tup))
        if isinstance(node, Not):
            return Not(tr(node.sub, not exists_variant))
        if isinstance(node, And):
            return And(tr(node.left, exists_variant), tr(node.right, exists_variant))
        if isinstance(node, Or):
            return Or(tr(node.left, exists_variant), tr(node.right, exists_variant))
        if isinstance(node, Exists):
            return Exists(node.var, And(Rel(names.universe, (Var(node.var),)),
                                        tr(node.body, exists_variant)))
        return Forall(node.var, Or(Not(Rel(names.universe, (Var(node.var),))),
                                   tr(node.body, exists_variant)))

    return extend_structure(struct), tr(phi, use_exists)
