"""Text formats: .fos structures, .fo formulas, .dg digraphs, JSON reports.

All printers are canonical (declaration order, sorted tuples, fixed spacing),
so parse(print(x)) reproduces x exactly.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Optional

from . import core
from .core import (And, Apply, Assignment, Const, Eq, Exists, Forall, Formula,
                   Not, Or, Rel, Structure, Var, Vocabulary)
from .digraph import Digraph
from .errors import ParseError, VocabularyError

VARIABLE_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

BENCH_CSV_HEADER = "family,k,norm,width,universe,engine,answer,peakAccountedBits,peakDepth,wallMs"


@dataclass(frozen=True)
class SourceSpan:
    """1-based position of a token in its source text."""

    line: int
    column: int


# ---------------------------------------------------------------------------
# Structures (.fos)
# ---------------------------------------------------------------------------


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse_nat(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"expected {what}, got {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"{what} must be nonnegative, got {value}", lineno)
    return value


def parse_structure(text: str) -> Structure:
    lines = list(_content_lines(text))
    if not lines or lines[0][1][0] != "universe" or len(lines[0][1]) != 2:
        raise ParseError("structure must start with 'universe N'",
                         lines[0][0] if lines else 1)
    n = _parse_nat(lines[0][1][1], lines[0][0], "universe size")
    if n < 1:
        raise ParseError("universe must be nonempty", lines[0][0])

    relations: list[tuple[str, int]] = []
    constants: list[str] = []
    functions: list[tuple[str, int]] = []
    rel_tuples: dict[str, set[tuple[int, ...]]] = {}
    const_values: dict[str, int] = {}
    fun_tables: dict[str, dict[tuple[int, ...], int]] = {}
    seen: set[str] = set()

    def declare(name: str, lineno: int) -> None:
        if name in seen:
            raise ParseError(f"duplicate symbol {name!r}", lineno)
        seen.add(name)

    i = 1
    while i < len(lines):
        lineno, tokens = lines[i]
        head = tokens[0]
        if head == "rel":
            if len(tokens) != 3:
                raise ParseError("expected 'rel NAME ARITY'", lineno)
            name, arity = tokens[1], _parse_nat(tokens[2], lineno, "arity")
            if arity < 1:
                raise ParseError(f"relation {name!r} must have positive arity", lineno)
            declare(name, lineno)
            relations.append((name, arity))
            rel_tuples[name] = set()
            i += 1
            closed = False
            while i < len(lines):
                lineno, tokens = lines[i]
                if tokens == ["."]:
                    closed = True
                    i += 1
                    break
                if len(tokens) != arity:
                    raise ParseError(
                        f"tuple for relation {name!r} needs {arity} element(s)", lineno)
                row = tuple(_parse_nat(t, lineno, "element") for t in tokens)
                if any(x >= n for x in row):
                    raise ParseError(f"element out of range in tuple {row}", lineno)
                rel_tuples[name].add(row)
                i += 1
            if not closed:
                raise ParseError(f"missing '.' terminator for relation {name!r}",
                                 lines[-1][0])
        elif head == "const":
            if len(tokens) != 3:
                raise ParseError("expected 'const NAME ELEM'", lineno)
            name = tokens[1]
            value = _parse_nat(tokens[2], lineno, "element")
            if value >= n:
                raise ParseError(f"constant {name!r} value {value} out of range", lineno)
            declare(name, lineno)
            constants.append(name)
            const_values[name] = value
            i += 1
        elif head == "fun":
            if len(tokens) != 3:
                raise ParseError("expected 'fun NAME ARITY'", lineno)
            name, arity = tokens[1], _parse_nat(tokens[2], lineno, "arity")
            if arity < 1:
                raise ParseError(f"function {name!r} must have positive arity", lineno)
            declare(name, lineno)
            functions.append((name, arity))
            table: dict[tuple[int, ...], int] = {}
            i += 1
            closed = False
            while i < len(lines):
                lineno, tokens = lines[i]
                if tokens == ["."]:
                    closed = True
                    i += 1
                    break
                if len(tokens) != arity + 1:
                    raise ParseError(
                        f"row for function {name!r} needs {arity + 1} number(s)", lineno)
                row = tuple(_parse_nat(t, lineno, "element") for t in tokens)
                args, value = row[:arity], row[arity]
                if any(x >= n for x in row):
                    raise ParseError(f"element out of range in row {row}", lineno)
                if args in table:
                    raise ParseError(f"duplicate row {args} for function {name!r}", lineno)
                table[args] = value
                i += 1
            if not closed:
                raise ParseError(f"missing '.' terminator for function {name!r}",
                                 lines[-1][0])
            if len(table) != n ** arity:
                raise ParseError(
                    f"partial function table for {name!r}: "
                    f"{len(table)} of {n ** arity} rows", lineno)
            fun_tables[name] = table
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)

    vocab = Vocabulary(tuple(relations), tuple(constants), tuple(functions))
    return Structure(vocab, n,
                     {k: frozenset(v) for k, v in rel_tuples.items()},
                     const_values, fun_tables)


def print_structure(struct: Structure) -> str:
    out = [f"universe {struct.universe_size}"]
    vocab = struct.vocabulary
    for name, arity in vocab.relations:
        out.append(f"rel {name} {arity}")
        for row in sorted(struct.relations[name]):
            out.append(" ".join(str(x) for x in row))
        out.append(".")
    for name in vocab.constants:
        out.append(f"const {name} {struct.constants[name]}")
    for name, arity in vocab.functions:
        out.append(f"fun {name} {arity}")
        table = struct.functions[name]
        for args in itertools.product(range(struct.universe_size), repeat=arity):
            out.append(" ".join(str(x) for x in args + (table[args],)))
        out.append(".")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Digraphs (.dg)
# ---------------------------------------------------------------------------


def parse_digraph(text: str) -> Digraph:
    lines = list(_content_lines(text))
    if not lines or lines[0][1][0] != "digraph" or len(lines[0][1]) != 2:
        raise ParseError("digraph must start with 'digraph N'",
                         lines[0][0] if lines else 1)
    n = _parse_nat(lines[0][1][1], lines[0][0], "vertex count")
    if n < 1:
        raise ParseError("digraph needs at least one vertex", lines[0][0])
    edges: set[tuple[int, int]] = set()
    closed = False
    for lineno, tokens in lines[1:]:
        if closed:
            raise ParseError("content after '.' terminator", lineno)
        if tokens == ["."]:
            closed = True
            continue
        if len(tokens) != 2:
            raise ParseError("expected edge line 'u v'", lineno)
        u = _parse_nat(tokens[0], lineno, "vertex")
        v = _parse_nat(tokens[1], lineno, "vertex")
        if u >= n or v >= n:
            raise ParseError(f"edge ({u}, {v}) out of range", lineno)
        edges.add((u, v))
    if not closed:
        raise ParseError("missing '.' terminator", lines[-1][0])
    return Digraph(n, frozenset(edges))


def print_digraph(graph: Digraph) -> str:
    out = [f"digraph {graph.num_vertices}"]
    for u, v in sorted(graph.edges):
        out.append(f"{u} {v}")
    out.append(".")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Formulas (.fo)
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[().,=&|~]")


@dataclass(frozen=True)
class _Token:
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            tokens.append(_Token(m.group(), SourceSpan(lineno, pos + 1)))
            pos = m.end()
    return tokens


class _SymbolResolver:
    """Resolves bare names against a declared or inferred vocabulary."""

    def __init__(self, vocab: Optional[Vocabulary]):
        self.declared = vocab
        self.relations: dict[str, int] = dict(vocab.relations) if vocab else {}
        self.constants: set[str] = set(vocab.constants) if vocab else set()
        self.functions: dict[str, int] = dict(vocab.functions) if vocab else {}

    def _fail(self, message: str, token: _Token):
        raise ParseError(message, token.span.line, token.span.column)

    def relation(self, token: _Token, arity: int) -> str:
        name = token.text
        if self.declared is None:
            if name in self.constants or name in self.functions:
                self._fail(f"{name!r} is not a relation symbol", token)
            known = self.relations.setdefault(name, arity)
        else:
            if name not in self.relations:
                self._fail(f"unknown relation symbol {name!r}", token)
            known = self.relations[name]
        if known != arity:
            self._fail(f"relation {name!r} expects {known} argument(s), got {arity}", token)
        return name

    def function(self, token: _Token, arity: int) -> str:
        name = token.text
        if self.declared is None:
            if name in self.constants or name in self.relations:
                self._fail(f"{name!r} is not a function symbol", token)
            known = self.functions.setdefault(name, arity)
        else:
            if name not in self.functions:
                self._fail(f"unknown function symbol {name!r}", token)
            known = self.functions[name]
        if known != arity:
            self._fail(f"function {name!r} expects {known} argument(s), got {arity}", token)
        return name

    def bare_name(self, token: _Token):
        """A name in term position with no parentheses: constant or variable."""
        name = token.text
        if name in self.constants:
            return Const(name)
        if self.declared is not None and (name in self.relations or name in self.functions):
            self._fail(f"{name!r} names a relation or function, not a term", token)
        if VARIABLE_RE.match(name):
            if self.declared is None and (name in self.relations or name in self.functions):
                self._fail(f"{name!r} already used as a relation or function", token)
            return Var(name)
        if self.declared is None:
            self.constants.add(name)
            return Const(name)
        self._fail(f"unknown symbol {name!r}", token)

    def quantified_variable(self, token: _Token) -> str:
        name = token.text
        if not VARIABLE_RE.match(name):
            self._fail(f"invalid variable name {name!r}", token)
        declared = (self.declared is not None and self.declared.has_symbol(name)) or (
            self.declared is None
            and (name in self.constants or name in self.relations or name in self.functions))
        if declared:
            self._fail(f"variable {name!r} collides with a declared symbol", token)
        return name

    def vocabulary(self) -> Vocabulary:
        if self.declared is not None:
            return self.declared
        return Vocabulary(tuple(sorted(self.relations.items())),
                          tuple(sorted(self.constants)),
                          tuple(sorted(self.functions.items())))


class _FormulaParser:
    def __init__(self, tokens: list[_Token], resolver: _SymbolResolver):
        self.tokens = tokens
        self.pos = 0
        self.resolver = resolver

    def _fail(self, message: str):
        if self.pos < len(self.tokens):
            span = self.tokens[self.pos].span
            raise ParseError(message, span.line, span.column)
        last = self.tokens[-1].span if self.tokens else SourceSpan(1, 1)
        raise ParseError(message + " (at end of input)", last.line, last.column)

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos].text if self.pos < len(self.tokens) else None

    def take(self, expected: Optional[str] = None) -> _Token:
        if self.pos >= len(self.tokens):
            self._fail(f"expected {expected!r}" if expected else "unexpected end of input")
        token = self.tokens[self.pos]
        if expected is not None and token.text != expected:
            self._fail(f"expected {expected!r}, got {token.text!r}")
        self.pos += 1
        return token

    def parse(self) -> Formula:
        phi = self.formula()
        if self.pos != len(self.tokens):
            self._fail(f"trailing input {self.tokens[self.pos].text!r}")
        return phi

    def formula(self) -> Formula:
        head = self.peek()
        if head == "EX" or head == "ALL":
            self.take()
            var = self.resolver.quantified_variable(self.take())
            self.take(".")
            body = self.formula()
            return Exists(var, body) if head == "EX" else Forall(var, body)
        if head == "~":
            self.take()
            return Not(self.formula())
        if head == "(":
            self.take("(")
            left = self.formula()
            op = self.take()
            if op.text not in ("&", "|"):
                raise ParseError(f"expected '&' or '|', got {op.text!r}",
                                 op.span.line, op.span.column)
            right = self.formula()
            self.take(")")
            return And(left, right) if op.text == "&" else Or(left, right)
        return self.atom()

    def atom(self) -> Formula:
        name = self.take()
        if not re.match(r"[A-Za-z_]", name.text):
            raise ParseError(f"expected an atom, got {name.text!r}",
                             name.span.line, name.span.column)
        if self.peek() == "(" and name.text not in ("EX", "ALL"):
            # Could be a relation atom or a function term followed by '='.
            saved = self.pos - 1
            args = self.arguments()
            if self.peek() == "=":
                self.pos = saved
                left = self.term()
                self.take("=")
                right = self.term()
                return Eq(left, right)
            rel = self.resolver.relation(name, len(args))
            return Rel(rel, tuple(args))
        term = self.resolver.bare_name(name)
        self.take("=")
        right = self.term()
        return Eq(term, right)

    def arguments(self) -> list:
        self.take("(")
        args = [self.term()]
        while self.peek() == ",":
            self.take(",")
            args.append(self.term())
        self.take(")")
        return args

    def term(self):
        name = self.take()
        if not re.match(r"[A-Za-z_]", name.text):
            raise ParseError(f"expected a term, got {name.text!r}",
                             name.span.line, name.span.column)
        if self.peek() == "(":
            args = self.arguments()
            fun = self.resolver.function(name, len(args))
            return Apply(fun, tuple(args))
        return self.resolver.bare_name(name)


def parse_formula(text: str, vocab: Optional[Vocabulary] = None) -> Formula:
    """Parse a formula; with ``vocab=None`` the vocabulary is inferred."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty formula")
    resolver = _SymbolResolver(vocab)
    phi = _FormulaParser(tokens, resolver).parse()
    if vocab is not None:
        core.validate_formula(phi, vocab)
    return phi


def infer_vocabulary(text: str) -> tuple[Formula, Vocabulary]:
    """Parse a formula with no declared vocabulary; returns both."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty formula")
    resolver = _SymbolResolver(None)
    phi = _FormulaParser(tokens, resolver).parse()
    return phi, resolver.vocabulary()


print_formula = core.format_formula
print_term = core.format_term


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def report_to_dict(report) -> dict:
    """Flatten an evaluation report into the JSON wire layout."""
    cls = report.classification
    return {
        "answer": report.answer,
        "engine": report.engine,
        "metrics": {
            "norm": cls.subformula_count,
            "width": cls.width,
            "vars": cls.num_variables,
            "sigmaLevel": cls.sigma_level,
            "piLevel": cls.pi_level,
        },
        "space": {
            "peakAccountedBits": report.peak_accounted_bits,
            "peakDepth": report.peak_depth,
        },
        "counters": {
            "recursiveCalls": report.recursive_calls,
            "assignmentsEnumerated": report.assignments_enumerated,
        },
        "wallMs": report.wall_ms,
    }


def print_report(report) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def bench_row(family: str, k: int, cls, universe: int, engine: str, report) -> str:
    fields = [family, k, cls.subformula_count, cls.width, universe, engine,
              str(report.answer).lower(), report.peak_accounted_bits,
              report.peak_depth, report.wall_ms]
    return ",".join(str(f) for f in fields)
